#include "ktk/types.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace ktk {

int Grid::floor_count() const {
    return static_cast<int>(std::count(cells.begin(), cells.end(), TileKind::Floor));
}

std::string unit_class_name(UnitClass c) {
    switch (c) {
        case UnitClass::King: return "King";
        case UnitClass::Warrior: return "Warrior";
        case UnitClass::Archer: return "Archer";
        case UnitClass::Healer: return "Healer";
    }
    return "?";
}

std::optional<UnitClass> unit_class_from_name(const std::string& name) {
    if (name == "King") return UnitClass::King;
    if (name == "Warrior") return UnitClass::Warrior;
    if (name == "Archer") return UnitClass::Archer;
    if (name == "Healer") return UnitClass::Healer;
    return std::nullopt;
}

GameConfig GameConfig::defaults() {
    GameConfig cfg;
    cfg.types[static_cast<int>(UnitClass::King)] =
        {UnitClass::King, 100, 2, 2, 20, 0, 0};
    cfg.types[static_cast<int>(UnitClass::Warrior)] =
        {UnitClass::Warrior, 120, 2, 1, 30, 0, 0};
    cfg.types[static_cast<int>(UnitClass::Archer)] =
        {UnitClass::Archer, 80, 2, 4, 20, 0, 0};
    cfg.types[static_cast<int>(UnitClass::Healer)] =
        {UnitClass::Healer, 60, 2, 0, 0, 2, 20};
    return cfg;
}

GameConfig load_game_config(const std::string& text) {
    GameConfig cfg = GameConfig::defaults();
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        std::string key;
        long long value;
        if (!(ls >> key >> value)) throw std::invalid_argument("bad game-config line: " + line);
        if (key == "max_turns") { cfg.max_turns = static_cast<int>(value); continue; }
        if (key == "isolation_radius") { cfg.isolation_radius = static_cast<int>(value); continue; }
        auto dot = key.find('.');
        if (dot == std::string::npos) throw std::invalid_argument("bad game-config key: " + key);
        auto cls = unit_class_from_name(key.substr(0, dot));
        if (!cls) throw std::invalid_argument("unknown unit type: " + key);
        UnitTypeSpec& t = cfg.types[static_cast<int>(*cls)];
        std::string attr = key.substr(dot + 1);
        int v = static_cast<int>(value);
        if (v < 0) throw std::invalid_argument("negative attribute: " + line);
        if (attr == "max_health") t.max_health = v;
        else if (attr == "move_range") t.move_range = v;
        else if (attr == "attack_range") t.attack_range = v;
        else if (attr == "attack_damage") t.attack_damage = v;
        else if (attr == "heal_range") t.heal_range = v;
        else if (attr == "heal_strength") t.heal_strength = v;
        else throw std::invalid_argument("unknown attribute: " + key);
    }
    return cfg;
}

std::string save_game_config(const GameConfig& cfg) {
    std::ostringstream out;
    out << "max_turns " << cfg.max_turns << "\n";
    out << "isolation_radius " << cfg.isolation_radius << "\n";
    for (const auto& t : cfg.types) {
        const std::string n = unit_class_name(t.cls);
        out << n << ".max_health " << t.max_health << "\n";
        out << n << ".move_range " << t.move_range << "\n";
        out << n << ".attack_range " << t.attack_range << "\n";
        out << n << ".attack_damage " << t.attack_damage << "\n";
        out << n << ".heal_range " << t.heal_range << "\n";
        out << n << ".heal_strength " << t.heal_strength << "\n";
    }
    return out.str();
}

const Unit* GameState::find_unit(int id) const {
    for (const auto& u : units)
        if (u.id == id) return &u;
    return nullptr;
}

Unit* GameState::find_unit(int id) {
    for (auto& u : units)
        if (u.id == id) return &u;
    return nullptr;
}

const Unit* GameState::king_of(int player) const {
    for (const auto& u : units)
        if (u.owner == player && u.cls == UnitClass::King) return &u;
    return nullptr;
}

const Unit* GameState::unit_at(int x, int y) const {
    for (const auto& u : units)
        if (u.x == x && u.y == y) return &u;
    return nullptr;
}

bool GameState::all_acted(int player) const {
    for (const auto& u : units)
        if (u.owner == player && !u.acted) return false;
    return true;
}

std::string serialize(const GameState& s) {
    std::ostringstream out;
    out << "turn " << s.turn << " active " << s.active_player << "\n";
    for (const auto& u : s.units) {
        out << u.id << " p" << u.owner << " " << unit_class_name(u.cls) << " " << u.x << ","
            << u.y << " hp" << u.health << (u.acted ? " acted" : "") << "\n";
    }
    return out.str();
}

std::string to_string(const UnitAction& a) {
    std::ostringstream out;
    out << "u" << a.unit_id;
    if (a.move_to) out << " move " << a.move_to->first << "," << a.move_to->second;
    if (a.target_id) out << " target " << *a.target_id;
    if (a.is_noop()) out << " noop";
    return out.str();
}

std::string to_string(const Outcome& o) {
    switch (o.kind) {
        case Outcome::Kind::Ongoing: return "ongoing";
        case Outcome::Kind::Draw: return "draw";
        case Outcome::Kind::Win: return "win" + std::to_string(o.winner);
    }
    return "?";
}

}  // namespace ktk
