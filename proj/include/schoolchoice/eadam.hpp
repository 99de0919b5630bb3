#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "schoolchoice/instance.hpp"
#include "schoolchoice/oracle.hpp"

namespace schoolchoice {

/// Consenting students, as a flag per student.
class ConsentSet {
public:
    ConsentSet() = default;
    ConsentSet(int num_students, bool value) : flags_(num_students, value ? 1 : 0) {}
    explicit ConsentSet(std::vector<char> flags) : flags_(std::move(flags)) {}

    static ConsentSet all(const Instance& inst) { return ConsentSet(inst.num_students(), true); }
    static ConsentSet none(const Instance& inst) { return ConsentSet(inst.num_students(), false); }
    // Whitespace-separated student names.
    static ConsentSet parse(const Instance& inst, std::string_view text);

    bool contains(StudentId a) const { return flags_[a] != 0; }
    void set(StudentId a, bool value) { flags_[a] = value ? 1 : 0; }
    int size() const;
    const std::vector<char>& flags() const { return flags_; }

    friend bool operator==(const ConsentSet&, const ConsentSet&) = default;

private:
    std::vector<char> flags_;
};

struct EadamStats {
    std::int64_t gs_reruns = 0;
    std::int64_t proposals = 0;
    std::int64_t edge_scans = 0;
    std::int64_t edges_removed = 0;
    std::int64_t rotations_eliminated = 0;
};

struct MechanismTimeout : std::runtime_error {
    using std::runtime_error::runtime_error;
};

using Deadline = std::optional<std::chrono::steady_clock::time_point>;

// Iterated traced deferred acceptance, dropping the consenting interrupting
// pairs of the latest step each time.
Assignment kesten_eadam(const Instance& inst, const ConsentSet& consent,
                        EadamStats* stats = nullptr, Deadline deadline = {});

// Schools that no student strictly prefers to his match (masked edges are
// ignored).
std::vector<SchoolId> underdemanded_schools(const Instance& inst, const Assignment& m,
                                            const EdgeMask* mask = nullptr);

// Underdemanded-school iteration: fix students at underdemanded schools and
// rerun deferred acceptance until every school is underdemanded.
Assignment simplified_eadam(const Instance& inst, const ConsentSet& consent,
                            EadamStats* stats = nullptr, Deadline deadline = {});

struct ConsentRunOptions {
    bool naive = false;
    std::optional<std::uint64_t> seed;
    bool check_invariants = false;
};

// School-side rotate-remove with consent; linear time.
Assignment rotate_remove_consent(const Instance& inst, const ConsentSet& consent,
                                 EadamStats* stats = nullptr, const ConsentRunOptions& opt = {});

// Brute force; refuses instances with more than `cap` assignments.
bool is_constrained_efficient(const Instance& inst, const ConsentSet& consent, const Assignment& m,
                              std::int64_t cap = 1'000'000);

// No nonconsenting student is part of a blocking pair.
bool respects_nonconsenting(const Instance& inst, const ConsentSet& consent, const Assignment& m);

}  // namespace schoolchoice
