#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace schoolchoice {

using StudentId = std::int32_t;
using SchoolId = std::int32_t;

// Sentinel for "no partner". Ranked below every listed agent.
inline constexpr std::int32_t kNone = -1;

struct ParseError : std::runtime_error {
    ParseError(int line, int column, const std::string& what);
    int line;
    int column;
};

// Raised for invariant violations detected outside the parser, such as an
// assignment that exceeds a quota or uses a non-edge.
struct InvalidInput : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Immutable one-to-many instance. Preference lists are stored in CSR form
/// and every cell carries the position of the mirror cell in the partner's
/// list, so rank comparisons on the hot paths need no lookup tables.
class Instance {
public:
    Instance() = default;

    // Validates symmetry, duplicates and quotas; throws InvalidInput.
    static Instance from_lists(std::vector<std::string> student_names,
                               std::vector<std::string> school_names,
                               std::vector<int> quotas,
                               const std::vector<std::vector<SchoolId>>& student_prefs,
                               const std::vector<std::vector<StudentId>>& school_prefs);

    int num_students() const { return static_cast<int>(student_names_.size()); }
    int num_schools() const { return static_cast<int>(school_names_.size()); }
    std::int64_t num_edges() const { return static_cast<std::int64_t>(s_cells_.size()); }

    int quota(SchoolId b) const { return quota_[b]; }

    std::span<const SchoolId> student_list(StudentId a) const {
        return {s_cells_.data() + s_off_[a], s_cells_.data() + s_off_[a + 1]};
    }
    std::span<const StudentId> school_list(SchoolId b) const {
        return {b_cells_.data() + b_off_[b], b_cells_.data() + b_off_[b + 1]};
    }
    // cross(a)[i]: position of a in the list of student_list(a)[i].
    std::span<const std::int32_t> student_cross(StudentId a) const {
        return {s_cross_.data() + s_off_[a], s_cross_.data() + s_off_[a + 1]};
    }
    std::span<const std::int32_t> school_cross(SchoolId b) const {
        return {b_cross_.data() + b_off_[b], b_cross_.data() + b_off_[b + 1]};
    }
    int student_degree(StudentId a) const { return static_cast<int>(s_off_[a + 1] - s_off_[a]); }
    int school_degree(SchoolId b) const { return static_cast<int>(b_off_[b + 1] - b_off_[b]); }

    // Flat index of the cell (a, i) over all student lists. Edge ids use it.
    std::int64_t student_cell(StudentId a, int pos) const { return s_off_[a] + pos; }
    std::int64_t student_offset(StudentId a) const { return s_off_[a]; }

    // Position of b in a's list (resp. a in b's list); nullopt if not an edge.
    std::optional<int> student_rank(StudentId a, SchoolId b) const;
    std::optional<int> school_rank(SchoolId b, StudentId a) const;
    bool has_edge(StudentId a, SchoolId b) const { return student_rank(a, b).has_value(); }

    // Preference tests with kNone ranked last. Both arguments must be kNone
    // or adjacent to the agent.
    bool student_prefers(StudentId a, SchoolId b1, SchoolId b2) const;
    bool school_prefers(SchoolId b, StudentId a1, StudentId a2) const;

    const std::string& student_name(StudentId a) const { return student_names_[a]; }
    const std::string& school_name(SchoolId b) const { return school_names_[b]; }
    const std::vector<std::string>& student_names() const { return student_names_; }
    const std::vector<std::string>& school_names() const { return school_names_; }
    std::optional<StudentId> find_student(std::string_view name) const;
    std::optional<SchoolId> find_school(std::string_view name) const;

    std::vector<std::vector<SchoolId>> student_prefs() const;
    std::vector<std::vector<StudentId>> school_prefs() const;
    const std::vector<int>& quotas() const { return quota_; }

private:
    std::vector<std::string> student_names_;
    std::vector<std::string> school_names_;
    std::vector<int> quota_;
    std::vector<std::int64_t> s_off_{0};
    std::vector<std::int64_t> b_off_{0};
    std::vector<SchoolId> s_cells_;
    std::vector<StudentId> b_cells_;
    std::vector<std::int32_t> s_cross_;
    std::vector<std::int32_t> b_cross_;
    // Per student, (school, position) sorted by school for rank lookups.
    std::vector<std::pair<SchoolId, std::int32_t>> s_sorted_;
    std::vector<std::pair<StudentId, std::int32_t>> b_sorted_;
    std::unordered_map<std::string, StudentId> student_index_;
    std::unordered_map<std::string, SchoolId> school_index_;
};

/// Alive flags over student-list cells. Used to run solvers on a
/// subinstance without rebuilding it.
class EdgeMask {
public:
    EdgeMask() = default;
    explicit EdgeMask(const Instance& inst) : alive_(inst.num_edges(), 1) {}

    bool alive(std::int64_t cell) const { return alive_[cell] != 0; }
    bool alive(const Instance& inst, StudentId a, int pos) const {
        return alive_[inst.student_cell(a, pos)] != 0;
    }
    // Returns true if the cell was alive.
    bool remove(std::int64_t cell) {
        bool was = alive_[cell] != 0;
        alive_[cell] = 0;
        return was;
    }
    bool remove_edge(const Instance& inst, StudentId a, SchoolId b);
    std::int64_t count_alive() const;

    // Instance restricted to alive edges, keeping agent order and names.
    Instance restrict(const Instance& inst) const;

private:
    std::vector<std::uint8_t> alive_;
};

Instance parse_instance(std::string_view text);
std::string format_instance(const Instance& inst);

/// Student-indexed assignment. Equality is equality of matched edge sets.
class Assignment {
public:
    Assignment() = default;
    explicit Assignment(int num_students) : match_(num_students, kNone) {}
    explicit Assignment(std::vector<SchoolId> match) : match_(std::move(match)) {}

    int num_students() const { return static_cast<int>(match_.size()); }
    SchoolId operator[](StudentId a) const { return match_[a]; }
    void assign(StudentId a, SchoolId b) { match_[a] = b; }
    void unassign(StudentId a) { match_[a] = kNone; }
    const std::vector<SchoolId>& raw() const { return match_; }
    int size() const;

    std::vector<std::vector<StudentId>> by_school(int num_schools) const;
    std::vector<std::pair<StudentId, SchoolId>> edges() const;

    friend bool operator==(const Assignment&, const Assignment&) = default;
    friend auto operator<=>(const Assignment&, const Assignment&) = default;

private:
    std::vector<SchoolId> match_;
};

// Throws InvalidInput unless m respects quotas and uses only edges.
void validate_assignment(const Instance& inst, const Assignment& m);

// Builds an assignment from (student, school) name pairs.
Assignment assignment_from_names(const Instance& inst,
                                 const std::vector<std::pair<std::string, std::string>>& pairs);

// "student school" per line, "-" for unmatched, student order.
std::string format_assignment(const Instance& inst, const Assignment& m);
Assignment parse_assignment(const Instance& inst, std::string_view text);

bool is_blocking_pair(const Instance& inst, const Assignment& m, StudentId a, SchoolId b);
std::vector<std::pair<StudentId, SchoolId>> blocking_pairs(const Instance& inst, const Assignment& m);
bool is_stable(const Instance& inst, const Assignment& m);
// True iff some edge of m1 blocks m2.
bool blocks(const Instance& inst, const Assignment& m1, const Assignment& m2);
// True iff every student weakly prefers m1 to m2.
bool dominates(const Instance& inst, const Assignment& m1, const Assignment& m2);

/// Seat expansion of a one-to-many instance into a marriage instance.
struct SeatReduction {
    Instance marriage;
    std::vector<SchoolId> seat_school;  // seat -> school
    std::vector<int> seat_copy;         // seat -> copy number, 1-based
    std::vector<int> first_seat;        // school -> first seat id

    // i-th best student of M(b) takes seat b^i.
    Assignment pi(const Instance& inst, const Assignment& m) const;
    Assignment pi_inverse(const Assignment& seats) const;
};

SeatReduction reduce_one_to_one(const Instance& inst);

}  // namespace schoolchoice
