#pragma once

#include <compare>
#include <vector>

#include "ktk/types.hpp"

namespace ktk {

// Action identity for comparing sampled edges across sibling nodes. Two nodes
// eligible for grouping decide for the same unit, so the unit id is implied.
struct ActionKey {
    int move_x = -1;
    int move_y = -1;
    int target = -1;

    static ActionKey of(const UnitAction& a) {
        ActionKey k;
        if (a.move_to) {
            k.move_x = a.move_to->first;
            k.move_y = a.move_to->second;
        }
        if (a.target_id) k.target = *a.target_id;
        return k;
    }
    auto operator<=>(const ActionKey&) const = default;
};

// "Same next state" witness: the acting unit's post-action position and
// health, plus the target's id and post-action health when a target exists.
struct Signature {
    int x = 0;
    int y = 0;
    int health = 0;
    bool has_target = false;
    int target_id = -1;
    int target_health = 0;

    bool operator==(const Signature&) const = default;
};

struct SearchNode {
    int parent = -1;
    int depth = 0;
    // Acting-unit slot in the fixed unit order; -1 for terminal nodes,
    // -2 in plain (non-unit-ordered) mode where grouping is never used.
    int slot = -1;
    UnitAction from_action;
    Signature signature;
    GameState state;
    bool terminal = false;
    double reward_sum = 0.0;
    double visits = 0.0;
    std::vector<UnitAction> actions;
    std::vector<int> children;  // children[i] decides actions[i]; grown in order
    int group = -1;             // index into Abstraction::groups, -1 ungrouped

    int expanded() const { return static_cast<int>(children.size()); }
    bool fully_expanded() const { return children.size() == actions.size(); }
    double mean_return() const { return visits > 0 ? reward_sum / visits : 0.0; }
};

struct Tree {
    std::vector<SearchNode> nodes;  // index order == creation order

    SearchNode& operator[](int i) { return nodes[i]; }
    const SearchNode& operator[](int i) const { return nodes[i]; }
    int size() const { return static_cast<int>(nodes.size()); }
};

}  // namespace ktk
