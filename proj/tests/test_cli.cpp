#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "support.hpp"

using namespace testsupport;

namespace {

struct Golden {
    std::string name;
    std::vector<std::string> args;  // "@x" expands to the fixture path of x
    int exit_code = 0;
    bool check_stderr = false;
    bool csv = false;  // mask the wall-time column
};

const std::vector<Golden>& cases() {
    static const std::vector<Golden> c{
        {"ex1_oracle_legal", {"oracle", "legal", "--input", "@ex1.inst"}},
        {"ex1_oracle_legal_trace", {"oracle", "legal", "--trace", "--input", "@ex1.inst"}},
        {"ex1_oracle_stable", {"oracle", "stable", "--input", "@ex1.inst"}},
        {"ex1_legal_subgraph", {"solve", "--mechanism", "legal-subgraph", "--input", "@ex1.inst"}},
        {"ex2_oracle_legal", {"oracle", "legal", "--input", "@ex2.inst"}},
        {"ex2_reduce", {"reduce", "--input", "@ex2.inst"}},
        {"ex3_school_opt", {"solve", "--mechanism", "legal-school-opt", "--input", "@ex3.inst"}},
        {"ex3_student_opt", {"solve", "--mechanism", "legal-student-opt", "--input", "@ex3.inst"}},
        {"ex3_legal_subgraph", {"solve", "--mechanism", "legal-subgraph", "--input", "@ex3.inst"}},
        {"ex4_student_opt", {"solve", "--mechanism", "legal-student-opt", "--input", "@ex4.inst"}},
        {"ex5_gs_trace", {"solve", "--mechanism", "gs", "--trace", "--input", "@ex5.inst"}, 0, true},
        {"ex5_eadam", {"solve", "--mechanism", "eadam", "--input", "@ex5.inst", "--consent", "@ex5.consent"}},
        {"ex6_eadam_simplified",
         {"solve", "--mechanism", "eadam-simplified", "--input", "@ex5.inst", "--consent", "@ex5.consent"}},
        {"ex7_eadam_fast",
         {"solve", "--mechanism", "eadam-fast", "--input", "@ex5.inst", "--consent", "@ex5.consent", "--counters"},
         0,
         true},
        {"ex7_eadam_fast_json",
         {"solve", "--mechanism", "eadam-fast", "--input", "@ex5.inst", "--consent", "@ex5.consent", "--format",
          "json"}},
        {"ex8_eadam_fast", {"solve", "--mechanism", "eadam-fast", "--input", "@ex4.inst", "--consent", "@ex8.consent"}},
        {"ex9_latin_count", {"latin", "count", "--matrix", "@ex9.matrix", "--legal"}},
        {"ex9_latin_aux", {"latin", "aux", "--matrix", "@ex9.matrix"}},
        {"ex9_aux_count", {"latin", "count", "--input", "@ex4.inst", "--legal"}},
        {"latin_gen_xor4", {"latin", "gen", "--order", "4"}},
        {"gen_small", {"gen", "--students", "6", "--schools", "2", "--quota", "2-3", "--seed", "9"}},
        {"gen_truncated_nyc", {"gen", "--students", "6", "--schools", "3", "--nyc", "--truncate", "2", "--seed", "9"}},
        {"bench_small",
         {"bench", "--students", "30", "--schools", "3", "--quota", "5-15", "--mechanisms", "gs,eadam-fast",
          "--rates", "0.5,1", "--reps", "2", "--seed", "4"},
         0,
         false,
         true},
        {"validate_ok", {"validate", "--input", "@ex3.inst"}},
        {"validate_malformed", {"validate", "--input", "@malformed_asym.inst"}, 1, true},
        {"verify_not_legal", {"oracle", "verify", "--input", "@ex1.inst", "--candidates", "@ex1_stable.txt"}, 1},
        {"verify_legal", {"oracle", "verify", "--input", "@ex1.inst", "--candidates", "@ex1_legal.txt"}},
        {"cap_exceeded", {"oracle", "legal", "--input", "@ex9.inst", "--cap", "10"}, 1, true},
        {"missing_file", {"validate", "--input", "@does_not_exist.inst"}, 1, true},
        {"unknown_mechanism", {"solve", "--mechanism", "nope", "--input", "@ex1.inst"}, 2},
        {"no_subcommand", {}, 2},
    };
    return c;
}

std::vector<std::string> expand(const std::vector<std::string>& args) {
    std::vector<std::string> out;
    for (const auto& a : args) out.push_back(a.size() > 1 && a[0] == '@' ? fixture_path(a.substr(1)) : a);
    return out;
}

// Fixture paths differ between checkouts; golden files use a placeholder.
std::string normalize(std::string s) {
    const std::string dir = FIXTURE_DIR;
    for (std::size_t p; (p = s.find(dir)) != std::string::npos;) s.replace(p, dir.size(), "<fixtures>");
    return s;
}

std::string mask_wall_time(const std::string& csv) {
    std::istringstream in(csv);
    std::string line, out;
    while (std::getline(in, line)) {
        std::vector<std::string> cols;
        std::stringstream ls(line);
        for (std::string c; std::getline(ls, c, ',');) cols.push_back(c);
        if (cols.size() == 15 && cols[0] != "instance_id") cols[9] = "*";
        for (std::size_t i = 0; i < cols.size(); ++i) out += (i ? "," : "") + cols[i];
        out += '\n';
    }
    return out;
}

void compare(const std::string& file, const std::string& actual) {
    namespace fs = std::filesystem;
    fs::path path = fs::path(GOLDEN_DIR) / file;
    if (std::getenv("UPDATE_GOLDEN")) {
        std::ofstream(path, std::ios::binary) << actual;
        return;
    }
    REQUIRE_MESSAGE(fs::exists(path), "missing golden file " << path.string());
    CHECK_MESSAGE(read_text(path.string()) == actual, "golden mismatch: " << file << "\n" << actual);
}

}  // namespace

TEST_CASE("golden CLI outputs") {
    for (const auto& g : cases()) {
        CAPTURE(g.name);
        std::ostringstream out, err;
        int code = schoolchoice::cli::run(expand(g.args), out, err);
        CHECK(code == g.exit_code);
        compare(g.name + ".out", normalize(g.csv ? mask_wall_time(out.str()) : out.str()));
        if (g.check_stderr) compare(g.name + ".err", normalize(err.str()));
    }
}

TEST_CASE("help exits cleanly") {
    std::ostringstream out, err;
    CHECK(schoolchoice::cli::run({"--help"}, out, err) == 0);
    CHECK(out.str().find("solve") != std::string::npos);
}

TEST_CASE("output flag writes a file") {
    auto path = std::filesystem::temp_directory_path() / "schoolchoice_cli_output.txt";
    std::ostringstream out, err;
    CHECK(schoolchoice::cli::run({"solve", "--mechanism", "gs", "--input", fixture_path("ex1.inst"), "--output",
                                  path.string()},
                                 out, err) == 0);
    CHECK(out.str().empty());
    CHECK(read_text(path.string()) == "1 B\n2 A\n3 C\n");
    std::filesystem::remove(path);
}

TEST_CASE("consent sampling from the command line is deterministic") {
    std::ostringstream o1, o2, e;
    auto args = std::vector<std::string>{"solve", "--mechanism", "eadam-fast", "--input", fixture_path("ex4.inst"),
                                         "--consent-rate", "0.5", "--seed", "3"};
    CHECK(schoolchoice::cli::run(args, o1, e) == 0);
    CHECK(schoolchoice::cli::run(args, o2, e) == 0);
    CHECK(o1.str() == o2.str());
}
