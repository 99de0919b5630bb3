#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "schoolchoice/instance.hpp"

namespace schoolchoice {

inline constexpr std::int64_t kDefaultEnumerationCap = 1'000'000;

struct EnumerationCapExceeded : std::runtime_error {
    EnumerationCapExceeded(double estimate, std::int64_t cap);
    double estimate;  // upper bound on the number of assignments
    std::int64_t cap;
};

// Product over students of (degree + 1); exact when no quota binds.
double assignment_count_bound(const Instance& inst);

// No unmatched student has an edge to a school with a free seat.
bool is_maximal(const Instance& inst, const Assignment& m);

// Every assignment (unmatched allowed), students in order, choices in
// "unmatched, then list order". Throws EnumerationCapExceeded past `cap`.
std::vector<Assignment> enumerate_assignments(const Instance& inst,
                                              std::int64_t cap = kDefaultEnumerationCap,
                                              bool maximal_only = false);

// Every stable assignment, in the same order. Searches with pruning of
// partial assignments that already contain a permanent blocking pair; the
// cap bounds the number of search nodes.
std::vector<Assignment> enumerate_stable(const Instance& inst,
                                         std::int64_t cap = kDefaultEnumerationCap);

struct LegalFixedPoint {
    std::vector<Assignment> legal;
    // L^0 (the stable set), L^1, ..., L^k with L^{k+1} = L^k.
    std::vector<std::vector<Assignment>> trace;
};

LegalFixedPoint legal_fixed_point(const Instance& inst, std::int64_t cap = kDefaultEnumerationCap);

struct LegalVerdict {
    enum class Failure { None, Internal, External };
    bool ok = true;
    Failure failure = Failure::None;
    // Internal: a member `blocker` blocks the member `blocked`.
    // External: `blocked` is a non-member that no member blocks.
    std::optional<Assignment> blocker;
    std::optional<Assignment> blocked;
};

LegalVerdict verify_legal_property(const Instance& inst, const std::vector<Assignment>& candidate,
                                   std::int64_t cap = kDefaultEnumerationCap);

/// Arc (u, v) iff assignment u blocks assignment v.
struct BlockingDigraph {
    std::vector<Assignment> nodes;
    std::vector<std::pair<int, int>> arcs;
};

BlockingDigraph build_blocking_digraph(const Instance& inst,
                                       std::int64_t cap = kDefaultEnumerationCap,
                                       bool maximal_only = false);

}  // namespace schoolchoice
