#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "schoolchoice/eadam.hpp"
#include "schoolchoice/instance.hpp"
#include "schoolchoice/random.hpp"
#include "schoolchoice/rotate_remove.hpp"

namespace schoolchoice {

enum class QuotaModel {
    Uniform,  // uniform in [quota_min, quota_max]
    Nyc,      // uniform in [ceil(mu/2), ceil(3mu/2)], mu = ceil(|A|/|B|)
};

struct GenConfig {
    int n_students = 1;
    int n_schools = 1;
    QuotaModel quota_model = QuotaModel::Uniform;
    int quota_min = 50;
    int quota_max = 150;
    std::optional<int> truncate;  // top-k student lists; complete when absent
    std::uint64_t seed = 0;

    void validate() const;
    std::pair<int, int> quota_range() const;
    std::string quota_model_name() const;
};

Instance gen_complete(const GenConfig& cfg);
// Clamps k to the number of schools; the clamp is reported via `warning`.
Instance gen_truncated(const GenConfig& cfg, std::string* warning = nullptr);
// Dispatches on cfg.truncate.
Instance generate(const GenConfig& cfg, std::string* warning = nullptr);

ConsentSet sample_consent(const Instance& inst, double rate, std::uint64_t seed);

enum class Mechanism {
    Gs,
    Eadam,
    EadamSimplified,
    EadamFast,
    LegalStudentOpt,
    LegalSchoolOpt,
    LegalSubgraph,
};

const char* mechanism_name(Mechanism m);
std::optional<Mechanism> parse_mechanism(std::string_view name);
const std::vector<Mechanism>& all_mechanisms();
bool is_eadam(Mechanism m);

struct MechanismCounters {
    std::int64_t proposals = 0;
    std::int64_t edge_scans = 0;
    std::int64_t rotations_eliminated = 0;
    std::int64_t edges_removed = 0;
    std::int64_t gs_reruns = 0;
};

struct MechanismRun {
    Assignment assignment;
    MechanismCounters counters;
    std::optional<LegalSubinstanceReport> report;  // legal-subgraph only
    double wall_ms = 0;
};

// Wall time covers the solver call only.
MechanismRun run_mechanism(Mechanism mech, const Instance& inst, const ConsentSet& consent,
                           Deadline deadline = {});

struct BenchCell {
    GenConfig config;
    std::vector<Mechanism> mechanisms;
    std::vector<double> consent_rates{1.0};
    int repetitions = 1;
};

struct BenchOptions {
    std::optional<double> timeout_ms;
    // Where to write the reproducer bundle on an equality violation.
    std::string reproducer_dir;
    int threads = 1;
};

struct BenchRecord {
    std::string instance_id;
    int n_students = 0;
    int n_schools = 0;
    std::int64_t n_edges = 0;
    std::string quota_model;
    std::string mechanism;
    double consent_rate = 1.0;
    std::uint64_t seed = 0;
    int repetition = 0;
    double wall_time_ms = 0;
    MechanismCounters counters;
    // Generator that produced the instance and consent draws.
    std::string rng = std::string(SplitMix64::kName) + "/v" + std::to_string(SplitMix64::kVersion);
};

struct EqualityViolation : std::runtime_error {
    EqualityViolation(const std::string& what, std::string bundle);
    std::string bundle;  // directory of the reproducer, empty if not written
};

std::vector<BenchRecord> run_bench(const std::vector<BenchCell>& plan, const BenchOptions& opt = {});

// Seeds derived for repetition r of a cell and for a consent draw.
std::uint64_t instance_seed(std::uint64_t cell_seed, int repetition);
std::uint64_t consent_seed(std::uint64_t inst_seed, double rate);

void write_csv(std::ostream& os, const std::vector<BenchRecord>& records);

}  // namespace schoolchoice
