#include "ktk/abstraction.hpp"

#include <algorithm>
#include <map>

namespace ktk {

namespace {

struct Sample {
    ActionKey key;
    double mean_return;
    Signature sig;
};

// Sampled edges of a node, sorted by action key. The per-edge return is the
// running mean of backpropagated rewards through that edge.
std::vector<Sample> node_samples(const Tree& tree, int n) {
    const SearchNode& node = tree[n];
    std::vector<Sample> out;
    out.reserve(node.children.size());
    for (int i = 0; i < node.expanded(); ++i) {
        const SearchNode& child = tree[node.children[i]];
        out.push_back({ActionKey::of(node.actions[i]), child.mean_return(), child.signature});
    }
    std::sort(out.begin(), out.end(),
              [](const Sample& a, const Sample& b) { return a.key < b.key; });
    return out;
}

double reward_error_on(const std::vector<Sample>& a, const std::vector<Sample>& b) {
    double err = 0.0;
    std::size_t i = 0, j = 0;
    while (i < a.size() || j < b.size()) {
        if (j == b.size() || (i < a.size() && a[i].key < b[j].key)) {
            err = std::max(err, std::abs(a[i].mean_return));  // unsampled in b counts as 0
            ++i;
        } else if (i == a.size() || b[j].key < a[i].key) {
            err = std::max(err, std::abs(b[j].mean_return));
            ++j;
        } else {
            err = std::max(err, std::abs(a[i].mean_return - b[j].mean_return));
            ++i;
            ++j;
        }
    }
    return err;
}

double transition_error_on(const std::vector<Sample>& a, const std::vector<Sample>& b,
                           TransitionErrorMode mode) {
    double sum = 0.0;
    int union_size = 0;
    std::size_t i = 0, j = 0;
    while (i < a.size() || j < b.size()) {
        ++union_size;
        if (j == b.size() || (i < a.size() && a[i].key < b[j].key)) {
            sum += 2.0;  // one-sided availability: disjoint point masses
            ++i;
        } else if (i == a.size() || b[j].key < a[i].key) {
            sum += 2.0;
            ++j;
        } else {
            if (!(a[i].sig == b[j].sig)) sum += 2.0;
            ++i;
            ++j;
        }
    }
    if (mode == TransitionErrorMode::Normalized && union_size > 0) sum /= union_size;
    return sum;
}

}  // namespace

int Abstraction::group_count(const Tree& tree) const {
    int singles = 0;
    for (const auto& n : tree.nodes)
        if (n.group < 0) ++singles;
    return static_cast<int>(groups.size()) + singles;
}

std::pair<double, double> group_stats(const Group& g) {
    return {g.mean_x(), g.mean_n()};
}

double reward_error(const Tree& tree, int n1, int n2) {
    return reward_error_on(node_samples(tree, n1), node_samples(tree, n2));
}

double transition_error(const Tree& tree, int n1, int n2, TransitionErrorMode mode) {
    return transition_error_on(node_samples(tree, n1), node_samples(tree, n2), mode);
}

void construct_abstraction(Tree& tree, Abstraction& abs, const AbstractionParams& params) {
    // Existing groups keyed by (depth, slot), in creation order.
    std::map<std::pair<int, int>, std::vector<int>> by_key;
    for (int g = 0; g < static_cast<int>(abs.groups.size()); ++g)
        by_key[{abs.groups[g].depth, abs.groups[g].slot}].push_back(g);

    int max_depth = 0;
    for (const auto& n : tree.nodes) max_depth = std::max(max_depth, n.depth);

    std::vector<std::vector<Sample>> samples(tree.size());
    std::vector<char> have_samples(tree.size(), 0);
    auto samples_of = [&](int n) -> const std::vector<Sample>& {
        if (!have_samples[n]) {
            samples[n] = node_samples(tree, n);
            have_samples[n] = 1;
        }
        return samples[n];
    };

    for (int depth = max_depth; depth >= 1; --depth) {
        for (int n = 0; n < tree.size(); ++n) {
            SearchNode& node = tree[n];
            if (node.depth != depth || node.group >= 0) continue;
            auto& candidates = by_key[{depth, node.slot}];
            int joined = -1;
            for (int g : candidates) {
                const Group& group = abs.groups[g];
                bool ok = true;
                for (int m : group.members) {
                    if (reward_error_on(samples_of(n), samples_of(m)) > params.eta_reward ||
                        transition_error_on(samples_of(n), samples_of(m), params.mode) >
                            params.eta_transition) {
                        ok = false;
                        break;
                    }
                }
                if (ok) {
                    joined = g;
                    break;
                }
            }
            if (joined < 0) {
                joined = static_cast<int>(abs.groups.size());
                abs.groups.push_back({depth, node.slot, {}, 0.0, 0.0});
                candidates.push_back(joined);
            }
            Group& g = abs.groups[joined];
            g.members.push_back(n);
            g.sum_x += node.reward_sum;
            g.sum_n += node.visits;
            node.group = joined;
        }
    }
}

void split_abstraction(Tree& tree, Abstraction& abs) {
    for (const Group& g : abs.groups) {
        const double xh = g.mean_x();
        const double nh = g.mean_n();
        for (int m : g.members) {
            tree[m].reward_sum = xh;
            tree[m].visits = nh;
            tree[m].group = -1;
        }
    }
    abs.groups.clear();
}

double compression_rate(const Tree& tree, const Abstraction& abs) {
    return static_cast<double>(tree.size()) / abs.group_count(tree);
}

}  // namespace ktk
