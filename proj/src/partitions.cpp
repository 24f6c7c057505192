#include "trajex/partitions.hpp"

#include <algorithm>
#include <functional>
#include <set>

namespace trajex {

namespace {

struct RuleIo {
    std::set<PredId> producesSameTime; // head atoms at T, constant times, or static preds
    std::set<PredId> producesDelayed;  // head atoms at T + 1
    std::set<PredId> readsPositive;    // positive patterns, choice patterns
    std::set<PredId> readsNegative;    // negated patterns, aggregate sources
};

RuleIo analyze(const Rule &rule) {
    RuleIo io;
    for (const auto &atom : rule.head) {
        if (atom.time.kind == TimeRef::Kind::VarPlusOne) {
            io.producesDelayed.insert(atom.pred);
        } else {
            io.producesSameTime.insert(atom.pred);
        }
    }
    for (const auto &lit : rule.body) {
        switch (lit.kind) {
        case Literal::Kind::Positive:
            io.readsPositive.insert(lit.atom.pred);
            break;
        case Literal::Kind::Negated:
            io.readsNegative.insert(lit.atom.pred);
            break;
        case Literal::Kind::Choice:
            if (lit.choiceSrc == Literal::ChoiceSrc::FromPattern) {
                io.readsPositive.insert(lit.atom.pred);
            }
            break;
        case Literal::Kind::Builtin:
            break;
        case Literal::Kind::Aggregate:
            for (const auto &pat : lit.aggPatterns) {
                io.readsNegative.insert(pat.pred);
            }
            break;
        }
    }
    return io;
}

struct Edge {
    std::uint32_t from;
    std::uint32_t to;
    bool negative;
    bool delayed; // producer writes at T + 1 only
};

// Tarjan's strongly connected components, iterative.
std::vector<int> tarjanScc(std::size_t n, const std::vector<std::vector<std::uint32_t>> &adj,
                           int &sccCount) {
    std::vector<int> index(n, -1);
    std::vector<int> low(n, 0);
    std::vector<bool> onStack(n, false);
    std::vector<std::uint32_t> stack;
    std::vector<int> comp(n, -1);
    int nextIndex = 0;
    sccCount = 0;

    struct Frame {
        std::uint32_t v;
        std::size_t child;
    };
    for (std::uint32_t root = 0; root < n; ++root) {
        if (index[root] != -1) {
            continue;
        }
        std::vector<Frame> frames{{root, 0}};
        index[root] = low[root] = nextIndex++;
        stack.push_back(root);
        onStack[root] = true;
        while (!frames.empty()) {
            Frame &f = frames.back();
            if (f.child < adj[f.v].size()) {
                std::uint32_t w = adj[f.v][f.child++];
                if (index[w] == -1) {
                    index[w] = low[w] = nextIndex++;
                    stack.push_back(w);
                    onStack[w] = true;
                    frames.push_back({w, 0});
                } else if (onStack[w]) {
                    low[f.v] = std::min(low[f.v], index[w]);
                }
            } else {
                if (low[f.v] == index[f.v]) {
                    for (;;) {
                        std::uint32_t w = stack.back();
                        stack.pop_back();
                        onStack[w] = false;
                        comp[w] = sccCount;
                        if (w == f.v) {
                            break;
                        }
                    }
                    ++sccCount;
                }
                std::uint32_t v = f.v;
                frames.pop_back();
                if (!frames.empty()) {
                    low[frames.back().v] = std::min(low[frames.back().v], low[v]);
                }
            }
        }
    }
    return comp;
}

} // namespace

PartitionPlan buildPartitions(const Program &prog) {
    const std::size_t n = prog.rules.size();
    std::vector<RuleIo> io;
    io.reserve(n);
    for (const auto &rule : prog.rules) {
        io.push_back(analyze(rule));
    }

    std::vector<Edge> edges;
    for (std::uint32_t s = 0; s < n; ++s) {
        for (std::uint32_t r = 0; r < n; ++r) {
            auto link = [&](PredId p, bool delayed) {
                bool negative = io[r].readsNegative.count(p) != 0;
                if (negative || io[r].readsPositive.count(p) != 0) {
                    edges.push_back(Edge{s, r, negative, delayed});
                }
            };
            for (PredId p : io[s].producesSameTime) {
                link(p, false);
            }
            for (PredId p : io[s].producesDelayed) {
                if (io[s].producesSameTime.count(p) == 0) {
                    link(p, true);
                }
            }
        }
    }

    // Negation/aggregation must not sit inside a cycle, even a cycle that
    // runs through a time step.
    {
        std::vector<std::vector<std::uint32_t>> adj(n);
        for (const auto &e : edges) {
            adj[e.from].push_back(e.to);
        }
        int count = 0;
        std::vector<int> comp = tarjanScc(n, adj, count);
        for (const auto &e : edges) {
            if (e.negative && comp[e.from] == comp[e.to]) {
                throw StratificationError(
                    "negation/aggregation inside a dependency cycle: rule '" +
                    prog.rules[e.to].id + "' reads a predicate produced by rule '" +
                    prog.rules[e.from].id + "' within the same cycle");
            }
        }
    }

    // The within-sweep plan uses only same-time edges.
    std::vector<std::vector<std::uint32_t>> adj(n);
    for (const auto &e : edges) {
        if (!e.delayed) {
            adj[e.from].push_back(e.to);
        }
    }
    int sccCount = 0;
    std::vector<int> comp = tarjanScc(n, adj, sccCount);

    std::vector<std::vector<std::uint32_t>> members(sccCount);
    for (std::uint32_t v = 0; v < n; ++v) {
        members[comp[v]].push_back(v);
    }
    std::vector<std::set<int>> succ(sccCount);
    std::vector<int> indegree(sccCount, 0);
    std::vector<std::vector<std::pair<int, bool>>> inEdges(sccCount); // (fromComp, negative)
    for (const auto &e : edges) {
        if (e.delayed) {
            continue;
        }
        int a = comp[e.from];
        int b = comp[e.to];
        if (a == b) {
            continue;
        }
        inEdges[b].push_back({a, e.negative});
        if (succ[a].insert(b).second) {
            ++indegree[b];
        }
    }

    // Deterministic topological order: among ready components, take the one
    // containing the smallest rule index.
    std::vector<int> minRule(sccCount);
    for (int c = 0; c < sccCount; ++c) {
        minRule[c] = static_cast<int>(*std::min_element(members[c].begin(), members[c].end()));
    }
    std::set<std::pair<int, int>> ready; // (minRule, comp)
    for (int c = 0; c < sccCount; ++c) {
        if (indegree[c] == 0) {
            ready.insert({minRule[c], c});
        }
    }
    std::vector<int> order;
    order.reserve(sccCount);
    while (!ready.empty()) {
        int c = ready.begin()->second;
        ready.erase(ready.begin());
        order.push_back(c);
        for (int next : succ[c]) {
            if (--indegree[next] == 0) {
                ready.insert({minRule[next], next});
            }
        }
    }

    std::vector<int> stratum(sccCount, 0);
    for (int c : order) {
        for (auto [from, negative] : inEdges[c]) {
            stratum[c] = std::max(stratum[c], stratum[from] + (negative ? 1 : 0));
        }
    }

    PartitionPlan plan;
    plan.partitions.reserve(sccCount);
    for (int c : order) {
        Partition part;
        part.rules = members[c];
        std::sort(part.rules.begin(), part.rules.end());
        part.stratum = stratum[c];
        part.recursive = part.rules.size() > 1;
        if (!part.recursive) {
            // A lone rule is recursive when it reads any predicate it
            // produces, at either time offset.
            const RuleIo &one = io[part.rules[0]];
            auto readsPred = [&](PredId p) {
                return one.readsPositive.count(p) != 0 || one.readsNegative.count(p) != 0;
            };
            for (PredId p : one.producesSameTime) {
                if (readsPred(p)) {
                    part.recursive = true;
                }
            }
            for (PredId p : one.producesDelayed) {
                if (readsPred(p)) {
                    part.recursive = true;
                }
            }
        }
        plan.partitions.push_back(std::move(part));
    }
    return plan;
}

} // namespace trajex
