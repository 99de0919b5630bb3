#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "schoolchoice/instance.hpp"

namespace schoolchoice {

// The side X whose agents get worse when an X-rotation is eliminated.
enum class Side { Students, Schools };

inline Side other(Side s) { return s == Side::Students ? Side::Schools : Side::Students; }
const char* side_name(Side s);

/// Cyclic list of (x_i, y_i) with x_i on `side`. Kept canonical: the pair
/// with the smallest x index comes first.
struct Rotation {
    Side side = Side::Students;
    std::vector<std::pair<int, int>> pairs;

    void canonicalize();
    // From the alternating form y0, x0, y1, x1, ... of a digraph cycle.
    static Rotation from_sequence(Side side, const std::vector<int>& ys_xs);

    friend bool operator==(const Rotation&, const Rotation&) = default;
    friend auto operator<=>(const Rotation&, const Rotation&) = default;
};

struct NotStable : std::invalid_argument {
    NotStable(StudentId a, SchoolId b);
    StudentId student;
    SchoolId school;
};

struct NotExposed : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// s_M(x): first y on x's list, past its own partners, that would accept x.
// Cells absent from the mask are skipped.
std::optional<int> successor(const Instance& inst, const Assignment& m, int x, Side side,
                             const EdgeMask* mask = nullptr);

// next_M(x): least preferred partner of s_M(x) when it is full, else kNone.
// Throws std::logic_error if s_M(x) does not exist.
int next_agent(const Instance& inst, const Assignment& m, int x, Side side,
               const EdgeMask* mask = nullptr);

/// Out-degree <= 1 digraph on X u Y u {empty}. Stored as two successor
/// arrays; kNone marks a missing arc and kEmpty the shared empty node.
struct RotationDigraph {
    static constexpr int kEmpty = -2;
    Side side = Side::Students;
    std::vector<int> x_out;  // x -> s_M(x)
    std::vector<int> y_out;  // y -> next_M(x) for the x pointing at y
    std::vector<int> x_out_pos;  // position of s_M(x) in x's list

    // Arcs as (from, to) in text form, for tests and debugging.
    std::vector<std::pair<std::string, std::string>> arcs(const Instance& inst) const;
};

// Throws NotStable if m admits a blocking pair.
RotationDigraph build_rotation_digraph(const Instance& inst, const Assignment& m, Side side,
                                       const EdgeMask* mask = nullptr);

std::vector<Rotation> exposed_rotations(const Instance& inst, const RotationDigraph& d);
std::vector<Rotation> exposed_rotations(const Instance& inst, const Assignment& m, Side side,
                                        const EdgeMask* mask = nullptr);

// M/rho. Throws NotExposed unless rho is exposed in m.
Assignment eliminate(const Instance& inst, const Assignment& m, const Rotation& rho,
                     const EdgeMask* mask = nullptr);
// Elimination without the exposure check.
Assignment eliminate_unchecked(const Assignment& m, const Rotation& rho);

struct RotationCounters {
    std::int64_t edge_scans = 0;
    std::int64_t rescans = 0;
    std::int64_t proposals = 0;
};

// Every X-rotation on the way from the X-optimal to the Y-optimal stable
// assignment, in discovery order. Linear-time path following.
std::vector<Rotation> all_rotations(const Instance& inst, Side side,
                                    RotationCounters* counters = nullptr);
// Reference version that rebuilds the digraph after every elimination.
std::vector<Rotation> all_rotations_naive(const Instance& inst, Side side);

Rotation sigma(const Rotation& student_rotation);
Rotation sigma_inverse(const Rotation& school_rotation);

// "students: (a1 b2) (a3 b1)"
std::string format_rotation(const Instance& inst, const Rotation& rho);

}  // namespace schoolchoice
