#include "schoolchoice/latin.hpp"

#include <sstream>
#include <stdexcept>

namespace schoolchoice {

bool latin_check(const std::vector<std::vector<int>>& q) {
    const int n = static_cast<int>(q.size());
    for (const auto& row : q)
        if (static_cast<int>(row.size()) != n) throw std::invalid_argument("matrix is not square");
    for (int i = 0; i < n; ++i) {
        std::vector<char> row_seen(n + 1, 0), col_seen(n + 1, 0);
        for (int j = 0; j < n; ++j) {
            int r = q[i][j], c = q[j][i];
            if (r < 1 || r > n || row_seen[r]) return false;
            if (c < 1 || c > n || col_seen[c]) return false;
            row_seen[r] = col_seen[c] = 1;
        }
    }
    return true;
}

LatinSquare make_latin(std::vector<std::vector<int>> q) {
    if (!latin_check(q)) throw std::invalid_argument("matrix is not a Latin square");
    LatinSquare l;
    l.n = static_cast<int>(q.size());
    l.q = std::move(q);
    return l;
}

LatinSquare parse_latin(std::string_view text) {
    std::vector<std::vector<int>> q;
    std::istringstream is{std::string(text)};
    std::string line;
    while (std::getline(is, line)) {
        if (auto h = line.find('#'); h != std::string::npos) line.resize(h);
        std::istringstream ls(line);
        std::vector<int> row;
        std::string tok;
        while (ls >> tok) {
            std::size_t used = 0;
            int v = 0;
            try {
                v = std::stoi(tok, &used);
            } catch (const std::exception&) {
                used = 0;
            }
            if (used != tok.size()) throw std::invalid_argument("matrix entry '" + tok + "' is not an integer");
            row.push_back(v);
        }
        if (!row.empty()) q.push_back(std::move(row));
    }
    return make_latin(std::move(q));
}

std::string format_latin(const LatinSquare& q) {
    std::ostringstream os;
    for (const auto& row : q.q) {
        for (std::size_t j = 0; j < row.size(); ++j) os << (j ? " " : "") << row[j];
        os << '\n';
    }
    return os.str();
}

Instance instance_from_latin(const LatinSquare& q) {
    const int n = q.n;
    std::vector<std::string> men, women;
    for (int i = 1; i <= n; ++i) {
        men.push_back("a" + std::to_string(i));
        women.push_back("b" + std::to_string(i));
    }
    std::vector<std::vector<SchoolId>> sp(n, std::vector<SchoolId>(n));
    std::vector<std::vector<StudentId>> bp(n, std::vector<StudentId>(n));
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            sp[a][q.at(a, b) - 1] = b;
            bp[b][n - q.at(a, b)] = a;
        }
    return Instance::from_lists(std::move(men), std::move(women), std::vector<int>(n, 1), sp, bp);
}

LatinSquare latin_from_instance(const Instance& inst) {
    const int n = inst.num_students();
    if (inst.num_schools() != n) throw std::invalid_argument("instance is not square");
    std::vector<std::vector<int>> q(n, std::vector<int>(n, 0));
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            auto ra = inst.student_rank(a, b);
            if (!ra) throw std::invalid_argument("instance lists are not complete");
            q[a][b] = *ra + 1;
            if (*inst.school_rank(b, a) != n - q[a][b])
                throw std::invalid_argument("ranks do not come from a Latin square");
        }
    return make_latin(std::move(q));
}

bool latin_stable(const LatinSquare& q, const Assignment& m, std::optional<LatinBlocking>* witness) {
    const int n = q.n;
    if (m.num_students() != n) throw std::invalid_argument("matching size does not match");
    std::vector<int> husband(n, -1);
    for (int a = 0; a < n; ++a) {
        int b = m[a];
        if (b < 0 || b >= n || husband[b] != -1)
            throw std::invalid_argument("matching is not perfect");
        husband[b] = a;
    }
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            int x = q.at(husband[b], b), y = q.at(a, b), z = q.at(a, m[a]);
            if (x < y && y < z) {
                if (witness) *witness = LatinBlocking{a, b};
                return false;
            }
        }
    return true;
}

Assignment diagonal_matching(const LatinSquare& q, int i) {
    if (i < 1 || i > q.n) throw std::invalid_argument("diagonal index out of range");
    Assignment m(q.n);
    for (int a = 0; a < q.n; ++a)
        for (int b = 0; b < q.n; ++b)
            if (q.at(a, b) == i) m.assign(a, b);
    return m;
}

Instance auxiliary_instance(const Instance& inst) {
    const int n = inst.num_students();
    if (inst.num_schools() != n) throw std::invalid_argument("auxiliary construction needs |A| = |B|");
    for (int b = 0; b < n; ++b)
        if (inst.quota(b) != 1) throw std::invalid_argument("auxiliary construction needs unit quotas");
    for (int a = 0; a < n; ++a)
        if (inst.student_degree(a) != n)
            throw std::invalid_argument("auxiliary construction needs complete lists");

    auto fresh = [&](const std::string& prefix, bool student) {
        std::string name = prefix + std::to_string(n + 1);
        bool taken = student ? inst.find_student(name) || inst.find_school(name)
                             : inst.find_school(name) || inst.find_student(name);
        return taken ? prefix + "~" : name;
    };
    auto men = inst.student_names();
    auto women = inst.school_names();
    men.push_back(fresh("a", true));
    women.push_back(fresh("b", false));

    auto sp = inst.student_prefs();
    auto bp = inst.school_prefs();
    for (auto& l : sp) l.push_back(n);
    std::vector<SchoolId> extra_man;
    for (int b = n - 1; b >= 0; --b) extra_man.push_back(b);
    extra_man.push_back(n);
    sp.push_back(extra_man);
    for (auto& l : bp) l.insert(l.begin() + 1, n);
    std::vector<StudentId> extra_woman{n};
    for (int a = 0; a < n; ++a) extra_woman.push_back(a);
    bp.push_back(extra_woman);
    return Instance::from_lists(std::move(men), std::move(women), std::vector<int>(n + 1, 1), sp, bp);
}

LatinSquare xor_latin(int n) {
    if (n < 1 || (n & (n - 1)) != 0) throw std::invalid_argument("order must be a power of two");
    std::vector<std::vector<int>> q(n, std::vector<int>(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) q[i][j] = (i ^ j) + 1;
    return make_latin(std::move(q));
}

}  // namespace schoolchoice
