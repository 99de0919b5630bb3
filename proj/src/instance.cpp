#include "schoolchoice/instance.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>

namespace schoolchoice {

ParseError::ParseError(int line_, int column_, const std::string& what)
    : std::runtime_error("line " + std::to_string(line_) + ", column " + std::to_string(column_) +
                         ": " + what),
      line(line_),
      column(column_) {}

namespace {

template <class T>
std::optional<int> sorted_lookup(const std::vector<std::pair<T, std::int32_t>>& v, std::int64_t lo,
                                 std::int64_t hi, T key) {
    auto first = v.begin() + lo;
    auto last = v.begin() + hi;
    auto it = std::lower_bound(first, last, key,
                               [](const auto& p, T k) { return p.first < k; });
    if (it == last || it->first != key) return std::nullopt;
    return it->second;
}

}  // namespace

Instance Instance::from_lists(std::vector<std::string> student_names,
                              std::vector<std::string> school_names, std::vector<int> quotas,
                              const std::vector<std::vector<SchoolId>>& student_prefs,
                              const std::vector<std::vector<StudentId>>& school_prefs) {
    const int na = static_cast<int>(student_names.size());
    const int nb = static_cast<int>(school_names.size());
    if (static_cast<int>(quotas.size()) != nb || static_cast<int>(student_prefs.size()) != na ||
        static_cast<int>(school_prefs.size()) != nb)
        throw InvalidInput("instance: list sizes do not match agent counts");

    Instance inst;
    for (int a = 0; a < na; ++a)
        if (!inst.student_index_.emplace(student_names[a], a).second)
            throw InvalidInput("duplicate student identifier '" + student_names[a] + "'");
    for (int b = 0; b < nb; ++b) {
        if (inst.student_index_.count(school_names[b]) ||
            !inst.school_index_.emplace(school_names[b], b).second)
            throw InvalidInput("duplicate identifier '" + school_names[b] + "'");
        if (quotas[b] < 1)
            throw InvalidInput("quota of school '" + school_names[b] + "' is below 1");
    }

    inst.student_names_ = std::move(student_names);
    inst.school_names_ = std::move(school_names);
    inst.quota_ = std::move(quotas);

    inst.s_off_.assign(1, 0);
    for (int a = 0; a < na; ++a) {
        for (SchoolId b : student_prefs[a]) {
            if (b < 0 || b >= nb) throw InvalidInput("student list references unknown school");
            inst.s_cells_.push_back(b);
        }
        inst.s_off_.push_back(static_cast<std::int64_t>(inst.s_cells_.size()));
    }
    inst.b_off_.assign(1, 0);
    for (int b = 0; b < nb; ++b) {
        for (StudentId a : school_prefs[b]) {
            if (a < 0 || a >= na) throw InvalidInput("school list references unknown student");
            inst.b_cells_.push_back(a);
        }
        inst.b_off_.push_back(static_cast<std::int64_t>(inst.b_cells_.size()));
    }

    auto build_sorted = [](const auto& cells, const auto& off, int n, auto& sorted,
                           const auto& names, const char* what) {
        sorted.resize(cells.size());
        for (int x = 0; x < n; ++x) {
            for (auto i = off[x]; i < off[x + 1]; ++i)
                sorted[i] = {cells[i], static_cast<std::int32_t>(i - off[x])};
            std::sort(sorted.begin() + off[x], sorted.begin() + off[x + 1]);
            for (auto i = off[x] + 1; i < off[x + 1]; ++i)
                if (sorted[i].first == sorted[i - 1].first)
                    throw InvalidInput(std::string("duplicate entry in list of ") + what + " '" +
                                       names[x] + "'");
        }
    };
    build_sorted(inst.s_cells_, inst.s_off_, na, inst.s_sorted_, inst.student_names_, "student");
    build_sorted(inst.b_cells_, inst.b_off_, nb, inst.b_sorted_, inst.school_names_, "school");

    if (inst.s_cells_.size() != inst.b_cells_.size())
        throw InvalidInput("adjacency is not symmetric");
    inst.s_cross_.resize(inst.s_cells_.size());
    inst.b_cross_.resize(inst.b_cells_.size());
    for (int a = 0; a < na; ++a) {
        for (auto i = inst.s_off_[a]; i < inst.s_off_[a + 1]; ++i) {
            SchoolId b = inst.s_cells_[i];
            auto pos = inst.school_rank(b, a);
            if (!pos)
                throw InvalidInput("adjacency is not symmetric: '" + inst.school_names_[b] +
                                   "' does not list '" + inst.student_names_[a] + "'");
            inst.s_cross_[i] = *pos;
            inst.b_cross_[inst.b_off_[b] + *pos] = static_cast<std::int32_t>(i - inst.s_off_[a]);
        }
    }
    return inst;
}

std::optional<int> Instance::student_rank(StudentId a, SchoolId b) const {
    return sorted_lookup(s_sorted_, s_off_[a], s_off_[a + 1], b);
}

std::optional<int> Instance::school_rank(SchoolId b, StudentId a) const {
    return sorted_lookup(b_sorted_, b_off_[b], b_off_[b + 1], a);
}

bool Instance::student_prefers(StudentId a, SchoolId b1, SchoolId b2) const {
    if (b1 == kNone) return false;
    if (b2 == kNone) return true;
    return *student_rank(a, b1) < *student_rank(a, b2);
}

bool Instance::school_prefers(SchoolId b, StudentId a1, StudentId a2) const {
    if (a1 == kNone) return false;
    if (a2 == kNone) return true;
    return *school_rank(b, a1) < *school_rank(b, a2);
}

std::optional<StudentId> Instance::find_student(std::string_view name) const {
    auto it = student_index_.find(std::string(name));
    if (it == student_index_.end()) return std::nullopt;
    return it->second;
}

std::optional<SchoolId> Instance::find_school(std::string_view name) const {
    auto it = school_index_.find(std::string(name));
    if (it == school_index_.end()) return std::nullopt;
    return it->second;
}

std::vector<std::vector<SchoolId>> Instance::student_prefs() const {
    std::vector<std::vector<SchoolId>> out(num_students());
    for (int a = 0; a < num_students(); ++a) {
        auto l = student_list(a);
        out[a].assign(l.begin(), l.end());
    }
    return out;
}

std::vector<std::vector<StudentId>> Instance::school_prefs() const {
    std::vector<std::vector<StudentId>> out(num_schools());
    for (int b = 0; b < num_schools(); ++b) {
        auto l = school_list(b);
        out[b].assign(l.begin(), l.end());
    }
    return out;
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

struct Token {
    std::string_view text;
    int column;  // 1-based
};

std::vector<Token> tokenize(std::string_view line) {
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
        if (i >= line.size()) break;
        std::size_t j = i;
        while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
        out.push_back({line.substr(i, j - i), static_cast<int>(i) + 1});
        i = j;
    }
    return out;
}

bool valid_name(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s)
        if (c == ':' || c == '[' || c == ']' || c == '#') return false;
    return true;
}

// A non-empty line: the identifier before ':' and the tokens after it.
struct Line {
    int number;
    std::string_view head;
    int head_column;
    std::vector<Token> items;
};

}  // namespace

Instance parse_instance(std::string_view text) {
    std::vector<Line> lines;
    int number = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        std::string_view raw = text.substr(pos, end - pos);
        ++number;
        pos = end + 1;
        if (auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
        auto toks = tokenize(raw);
        if (toks.empty()) {
            if (end == text.size()) break;
            continue;
        }
        Line ln{number, {}, 0, {}};
        if (lines.empty() && toks[0].text == "instance") {
            if (toks.size() != 2 || toks[1].text != "v1")
                throw ParseError(number, toks.size() > 1 ? toks[1].column : toks[0].column,
                                 "expected 'instance v1'");
            ln.head = "instance";
            ln.head_column = toks[0].column;
            lines.push_back(ln);
            if (end == text.size()) break;
            continue;
        }
        // Head is everything up to the first ':'; it may be glued to the
        // following token ("a1:b1") or stand alone ("a1 :").
        std::string_view first = toks[0].text;
        auto colon = first.find(':');
        if (colon == std::string_view::npos) {
            if (toks.size() >= 2 && toks[1].text.substr(0, 1) == ":") {
                ln.head = first;
                ln.head_column = toks[0].column;
                std::string_view rest = toks[1].text.substr(1);
                if (!rest.empty()) ln.items.push_back({rest, toks[1].column + 1});
                ln.items.insert(ln.items.end(), toks.begin() + 2, toks.end());
            } else {
                throw ParseError(number, toks[0].column, "expected ':' after '" +
                                                             std::string(first) + "'");
            }
        } else {
            ln.head = first.substr(0, colon);
            ln.head_column = toks[0].column;
            std::string_view rest = first.substr(colon + 1);
            if (!rest.empty())
                ln.items.push_back({rest, toks[0].column + static_cast<int>(colon) + 1});
            ln.items.insert(ln.items.end(), toks.begin() + 1, toks.end());
        }
        if (ln.head.empty()) throw ParseError(number, toks[0].column, "missing identifier before ':'");
        for (const auto& it : ln.items)
            if (it.text.find(':') != std::string_view::npos)
                throw ParseError(number, it.column, "unexpected ':'");
        lines.push_back(ln);
        if (end == text.size()) break;
    }

    if (lines.empty() || lines[0].head != "instance")
        throw ParseError(lines.empty() ? 1 : lines[0].number, 1, "missing 'instance v1' header");
    if (lines.size() < 2 || lines[1].head != "students")
        throw ParseError(lines.size() < 2 ? lines[0].number + 1 : lines[1].number, 1,
                         "expected 'students:' section");
    if (lines.size() < 3 || lines[2].head != "schools")
        throw ParseError(lines.size() < 3 ? lines[1].number + 1 : lines[2].number, 1,
                         "expected 'schools:' section");

    std::vector<std::string> students, schools;
    std::vector<int> quotas;
    std::unordered_map<std::string, std::pair<bool, int>> ids;  // name -> (is_school, index)
    for (const auto& t : lines[1].items) {
        if (!valid_name(t.text)) throw ParseError(lines[1].number, t.column, "invalid identifier");
        if (!ids.emplace(std::string(t.text), std::pair{false, static_cast<int>(students.size())}).second)
            throw ParseError(lines[1].number, t.column,
                             "duplicate identifier '" + std::string(t.text) + "'");
        students.emplace_back(t.text);
    }
    for (const auto& t : lines[2].items) {
        std::string_view name = t.text;
        int q = 1;
        if (auto br = name.find('['); br != std::string_view::npos) {
            if (name.back() != ']')
                throw ParseError(lines[2].number, t.column, "malformed quota");
            std::string_view num = name.substr(br + 1, name.size() - br - 2);
            int value = 0;
            auto [p, ec] = std::from_chars(num.data(), num.data() + num.size(), value);
            if (num.empty() || ec != std::errc() || p != num.data() + num.size()) {
                if (!num.empty() && num[0] == '-')
                    throw ParseError(lines[2].number, t.column + static_cast<int>(br) + 1,
                                     "quota must be at least 1");
                throw ParseError(lines[2].number, t.column + static_cast<int>(br) + 1,
                                 "malformed quota");
            }
            if (value < 1)
                throw ParseError(lines[2].number, t.column + static_cast<int>(br) + 1,
                                 "quota must be at least 1");
            q = value;
            name = name.substr(0, br);
        }
        if (!valid_name(name)) throw ParseError(lines[2].number, t.column, "invalid identifier");
        if (!ids.emplace(std::string(name), std::pair{true, static_cast<int>(schools.size())}).second)
            throw ParseError(lines[2].number, t.column,
                             "duplicate identifier '" + std::string(name) + "'");
        schools.emplace_back(name);
        quotas.push_back(q);
    }

    std::vector<std::vector<SchoolId>> sp(students.size());
    std::vector<std::vector<StudentId>> bp(schools.size());
    std::vector<int> s_line(students.size(), 0), b_line(schools.size(), 0);
    // (line, column) of each list entry, for symmetry diagnostics.
    std::vector<std::vector<std::pair<int, int>>> s_where(students.size()), b_where(schools.size());

    for (std::size_t li = 3; li < lines.size(); ++li) {
        const Line& ln = lines[li];
        auto it = ids.find(std::string(ln.head));
        if (it == ids.end())
            throw ParseError(ln.number, ln.head_column,
                             "unknown identifier '" + std::string(ln.head) + "'");
        auto [is_school, x] = it->second;
        auto& seen_line = is_school ? b_line[x] : s_line[x];
        if (seen_line)
            throw ParseError(ln.number, ln.head_column,
                             "duplicate list for '" + std::string(ln.head) + "' (first on line " +
                                 std::to_string(seen_line) + ")");
        seen_line = ln.number;
        std::vector<char> used(is_school ? students.size() : schools.size(), 0);
        for (const auto& t : ln.items) {
            auto jt = ids.find(std::string(t.text));
            if (jt == ids.end())
                throw ParseError(ln.number, t.column,
                                 "unknown identifier '" + std::string(t.text) + "'");
            if (jt->second.first == is_school)
                throw ParseError(ln.number, t.column,
                                 "'" + std::string(t.text) + "' is on the same side as '" +
                                     std::string(ln.head) + "'");
            int y = jt->second.second;
            if (used[y])
                throw ParseError(ln.number, t.column,
                                 "duplicate entry '" + std::string(t.text) + "'");
            used[y] = 1;
            if (is_school) {
                bp[x].push_back(y);
                b_where[x].push_back({ln.number, t.column});
            } else {
                sp[x].push_back(y);
                s_where[x].push_back({ln.number, t.column});
            }
        }
    }

    // Symmetry: report the first offending entry in file order.
    std::optional<std::pair<std::pair<int, int>, std::string>> bad;
    auto consider = [&](std::pair<int, int> where, std::string msg) {
        if (!bad || where < bad->first) bad = {{where, std::move(msg)}};
    };
    {
        std::vector<std::vector<StudentId>> sorted_bp = bp;
        for (auto& l : sorted_bp) std::sort(l.begin(), l.end());
        std::vector<std::vector<SchoolId>> sorted_sp = sp;
        for (auto& l : sorted_sp) std::sort(l.begin(), l.end());
        for (std::size_t a = 0; a < sp.size(); ++a)
            for (std::size_t i = 0; i < sp[a].size(); ++i) {
                SchoolId b = sp[a][i];
                if (!std::binary_search(sorted_bp[b].begin(), sorted_bp[b].end(),
                                        static_cast<StudentId>(a)))
                    consider(s_where[a][i], "asymmetric adjacency: '" + students[a] + "' lists '" +
                                                schools[b] + "' but not vice versa");
            }
        for (std::size_t b = 0; b < bp.size(); ++b)
            for (std::size_t i = 0; i < bp[b].size(); ++i) {
                StudentId a = bp[b][i];
                if (!std::binary_search(sorted_sp[a].begin(), sorted_sp[a].end(),
                                        static_cast<SchoolId>(b)))
                    consider(b_where[b][i], "asymmetric adjacency: '" + schools[b] + "' lists '" +
                                                students[a] + "' but not vice versa");
            }
    }
    if (bad) throw ParseError(bad->first.first, bad->first.second, bad->second);

    return Instance::from_lists(std::move(students), std::move(schools), std::move(quotas), sp, bp);
}

std::string format_instance(const Instance& inst) {
    std::ostringstream os;
    os << "instance v1\nstudents:";
    for (const auto& n : inst.student_names()) os << ' ' << n;
    os << "\nschools:";
    for (int b = 0; b < inst.num_schools(); ++b) {
        os << ' ' << inst.school_name(b);
        if (inst.quota(b) != 1) os << '[' << inst.quota(b) << ']';
    }
    os << '\n';
    for (int a = 0; a < inst.num_students(); ++a) {
        os << inst.student_name(a) << ':';
        for (SchoolId b : inst.student_list(a)) os << ' ' << inst.school_name(b);
        os << '\n';
    }
    for (int b = 0; b < inst.num_schools(); ++b) {
        os << inst.school_name(b) << ':';
        for (StudentId a : inst.school_list(b)) os << ' ' << inst.student_name(a);
        os << '\n';
    }
    return os.str();
}

// ---------------------------------------------------------------------------
// Assignments

int Assignment::size() const {
    return static_cast<int>(std::count_if(match_.begin(), match_.end(),
                                          [](SchoolId b) { return b != kNone; }));
}

std::vector<std::vector<StudentId>> Assignment::by_school(int num_schools) const {
    std::vector<std::vector<StudentId>> out(num_schools);
    for (int a = 0; a < num_students(); ++a)
        if (match_[a] != kNone) out[match_[a]].push_back(a);
    return out;
}

std::vector<std::pair<StudentId, SchoolId>> Assignment::edges() const {
    std::vector<std::pair<StudentId, SchoolId>> out;
    for (int a = 0; a < num_students(); ++a)
        if (match_[a] != kNone) out.emplace_back(a, match_[a]);
    return out;
}

void validate_assignment(const Instance& inst, const Assignment& m) {
    if (m.num_students() != inst.num_students())
        throw InvalidInput("assignment size does not match the instance");
    std::vector<int> load(inst.num_schools(), 0);
    for (int a = 0; a < inst.num_students(); ++a) {
        SchoolId b = m[a];
        if (b == kNone) continue;
        if (b < 0 || b >= inst.num_schools() || !inst.has_edge(a, b))
            throw InvalidInput("assignment uses a non-edge at student '" + inst.student_name(a) + "'");
        if (++load[b] > inst.quota(b))
            throw InvalidInput("assignment exceeds the quota of '" + inst.school_name(b) + "'");
    }
}

Assignment assignment_from_names(const Instance& inst,
                                 const std::vector<std::pair<std::string, std::string>>& pairs) {
    Assignment m(inst.num_students());
    for (const auto& [s, b] : pairs) {
        auto a = inst.find_student(s);
        if (!a) throw InvalidInput("unknown student '" + s + "'");
        if (b == "-") {
            m.unassign(*a);
            continue;
        }
        auto sb = inst.find_school(b);
        if (!sb) throw InvalidInput("unknown school '" + b + "'");
        m.assign(*a, *sb);
    }
    validate_assignment(inst, m);
    return m;
}

std::string format_assignment(const Instance& inst, const Assignment& m) {
    std::string out;
    for (int a = 0; a < inst.num_students(); ++a) {
        out += inst.student_name(a);
        out += ' ';
        out += m[a] == kNone ? std::string("-") : inst.school_name(m[a]);
        out += '\n';
    }
    return out;
}

Assignment parse_assignment(const Instance& inst, std::string_view text) {
    std::vector<std::pair<std::string, std::string>> pairs;
    std::istringstream is{std::string(text)};
    std::string line;
    while (std::getline(is, line)) {
        if (auto h = line.find('#'); h != std::string::npos) line.resize(h);
        std::istringstream ls(line);
        std::string s, b, extra;
        if (!(ls >> s)) continue;
        if (!(ls >> b) || (ls >> extra))
            throw InvalidInput("assignment line must be 'student school': " + line);
        pairs.emplace_back(s, b);
    }
    return assignment_from_names(inst, pairs);
}

// ---------------------------------------------------------------------------
// Blocking and dominance

namespace {

// Per school: number assigned and position of the least preferred member.
struct SchoolLoad {
    std::vector<int> count;
    std::vector<int> worst_pos;
};

SchoolLoad school_load(const Instance& inst, const Assignment& m) {
    SchoolLoad s{std::vector<int>(inst.num_schools(), 0), std::vector<int>(inst.num_schools(), -1)};
    for (int a = 0; a < inst.num_students(); ++a) {
        SchoolId b = m[a];
        if (b == kNone) continue;
        ++s.count[b];
        s.worst_pos[b] = std::max(s.worst_pos[b], *inst.school_rank(b, a));
    }
    return s;
}

bool blocking_with_load(const Instance& inst, const Assignment& m, const SchoolLoad& load,
                        StudentId a, SchoolId b, int a_rank_of_b, int b_rank_of_a) {
    if (m[a] == b) return false;
    if (m[a] != kNone && *inst.student_rank(a, m[a]) < a_rank_of_b) return false;
    return load.count[b] < inst.quota(b) || b_rank_of_a < load.worst_pos[b];
}

}  // namespace

bool is_blocking_pair(const Instance& inst, const Assignment& m, StudentId a, SchoolId b) {
    if (a < 0 || a >= inst.num_students() || b < 0 || b >= inst.num_schools())
        throw InvalidInput("unknown agent in blocking-pair query");
    auto ra = inst.student_rank(a, b);
    if (!ra) throw InvalidInput("blocking-pair query on a non-edge");
    return blocking_with_load(inst, m, school_load(inst, m), a, b, *ra, *inst.school_rank(b, a));
}

std::vector<std::pair<StudentId, SchoolId>> blocking_pairs(const Instance& inst,
                                                           const Assignment& m) {
    std::vector<std::pair<StudentId, SchoolId>> out;
    auto load = school_load(inst, m);
    for (int a = 0; a < inst.num_students(); ++a) {
        auto list = inst.student_list(a);
        auto cross = inst.student_cross(a);
        for (int i = 0; i < static_cast<int>(list.size()); ++i) {
            if (list[i] == m[a]) break;  // later entries are worse than M(a)
            if (blocking_with_load(inst, m, load, a, list[i], i, cross[i]))
                out.emplace_back(a, list[i]);
        }
    }
    return out;
}

bool is_stable(const Instance& inst, const Assignment& m) {
    return blocking_pairs(inst, m).empty();
}

bool blocks(const Instance& inst, const Assignment& m1, const Assignment& m2) {
    auto load = school_load(inst, m2);
    for (int a = 0; a < inst.num_students(); ++a) {
        SchoolId b = m1[a];
        if (b == kNone) continue;
        if (blocking_with_load(inst, m2, load, a, b, *inst.student_rank(a, b),
                               *inst.school_rank(b, a)))
            return true;
    }
    return false;
}

bool dominates(const Instance& inst, const Assignment& m1, const Assignment& m2) {
    for (int a = 0; a < inst.num_students(); ++a)
        if (inst.student_prefers(a, m2[a], m1[a])) return false;
    return true;
}

bool EdgeMask::remove_edge(const Instance& inst, StudentId a, SchoolId b) {
    auto pos = inst.student_rank(a, b);
    if (!pos) throw InvalidInput("edge mask: not an edge");
    return remove(inst.student_cell(a, *pos));
}

std::int64_t EdgeMask::count_alive() const {
    return std::count(alive_.begin(), alive_.end(), std::uint8_t{1});
}

Instance EdgeMask::restrict(const Instance& inst) const {
    std::vector<std::vector<SchoolId>> sp(inst.num_students());
    std::vector<std::vector<StudentId>> bp(inst.num_schools());
    for (int a = 0; a < inst.num_students(); ++a) {
        auto l = inst.student_list(a);
        for (int i = 0; i < static_cast<int>(l.size()); ++i)
            if (alive(inst, a, i)) sp[a].push_back(l[i]);
    }
    for (int b = 0; b < inst.num_schools(); ++b) {
        auto l = inst.school_list(b);
        auto cross = inst.school_cross(b);
        for (int i = 0; i < static_cast<int>(l.size()); ++i)
            if (alive(inst, l[i], cross[i])) bp[b].push_back(l[i]);
    }
    return Instance::from_lists(inst.student_names(), inst.school_names(), inst.quotas(), sp, bp);
}

// ---------------------------------------------------------------------------
// Seat reduction

SeatReduction reduce_one_to_one(const Instance& inst) {
    SeatReduction r;
    std::vector<std::string> seat_names;
    for (int b = 0; b < inst.num_schools(); ++b) {
        r.first_seat.push_back(static_cast<int>(r.seat_school.size()));
        for (int i = 1; i <= inst.quota(b); ++i) {
            r.seat_school.push_back(b);
            r.seat_copy.push_back(i);
            seat_names.push_back(inst.quota(b) == 1 ? inst.school_name(b)
                                                    : inst.school_name(b) + "^" + std::to_string(i));
        }
    }
    std::vector<std::vector<SchoolId>> sp(inst.num_students());
    for (int a = 0; a < inst.num_students(); ++a)
        for (SchoolId b : inst.student_list(a))
            for (int i = 0; i < inst.quota(b); ++i) sp[a].push_back(r.first_seat[b] + i);
    std::vector<std::vector<StudentId>> bp;
    for (std::size_t s = 0; s < r.seat_school.size(); ++s) {
        auto l = inst.school_list(r.seat_school[s]);
        bp.emplace_back(l.begin(), l.end());
    }
    r.marriage = Instance::from_lists(inst.student_names(), std::move(seat_names),
                                      std::vector<int>(r.seat_school.size(), 1), sp, bp);
    return r;
}

Assignment SeatReduction::pi(const Instance& inst, const Assignment& m) const {
    Assignment out(m.num_students());
    auto groups = m.by_school(inst.num_schools());
    for (int b = 0; b < inst.num_schools(); ++b) {
        auto& g = groups[b];
        std::sort(g.begin(), g.end(), [&](StudentId x, StudentId y) {
            return *inst.school_rank(b, x) < *inst.school_rank(b, y);
        });
        for (std::size_t i = 0; i < g.size(); ++i) out.assign(g[i], first_seat[b] + static_cast<int>(i));
    }
    return out;
}

Assignment SeatReduction::pi_inverse(const Assignment& seats) const {
    Assignment out(seats.num_students());
    for (int a = 0; a < seats.num_students(); ++a)
        if (seats[a] != kNone) out.assign(a, seat_school[seats[a]]);
    return out;
}

}  // namespace schoolchoice
