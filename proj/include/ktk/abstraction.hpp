#pragma once

#include <utility>
#include <vector>

#include "ktk/tree.hpp"

namespace ktk {

// Raw keeps the literal transition-error sum (2 per mismatched action);
// Normalized divides by the size of the action union so eta_transition
// bounds the tolerated fraction of mismatches.
enum class TransitionErrorMode { Normalized, Raw };

struct AbstractionParams {
    double eta_reward = 0.1;
    double eta_transition = 0.3;
    TransitionErrorMode mode = TransitionErrorMode::Normalized;
};

struct Group {
    int depth = 0;
    int slot = -1;
    std::vector<int> members;
    double sum_x = 0.0;
    double sum_n = 0.0;

    int size() const { return static_cast<int>(members.size()); }
    double mean_x() const { return sum_x / size(); }
    double mean_n() const { return sum_n / size(); }
};

// Partition of tree nodes. Nodes with group == -1 are implicit singletons.
struct Abstraction {
    std::vector<Group> groups;  // creation order; never reordered

    bool identity() const { return groups.empty(); }
    int group_count(const Tree& tree) const;
};

std::pair<double, double> group_stats(const Group& g);

double reward_error(const Tree& tree, int n1, int n2);
double transition_error(const Tree& tree, int n1, int n2, TransitionErrorMode mode);

// One batch pass: deepest depth to 1, ungrouped nodes in creation order, each
// joining the first existing same-depth same-slot group whose every member
// passes both error thresholds (complete linkage), else founding a new group.
void construct_abstraction(Tree& tree, Abstraction& abs, const AbstractionParams& params);

// Assigns each group's averaged statistics to its members and dissolves all
// groups; idempotent.
void split_abstraction(Tree& tree, Abstraction& abs);

double compression_rate(const Tree& tree, const Abstraction& abs);

}  // namespace ktk
