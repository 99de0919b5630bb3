#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "schoolchoice/instance.hpp"

namespace schoolchoice {

/// Q(a, b) for men a (rows) and women b (columns), 1-based ranks.
struct LatinSquare {
    int n = 0;
    std::vector<std::vector<int>> q;

    int at(int a, int b) const { return q[a][b]; }
};

// Throws std::invalid_argument on a non-square matrix.
bool latin_check(const std::vector<std::vector<int>>& q);
// Validates and wraps; throws std::invalid_argument if not Latin.
LatinSquare make_latin(std::vector<std::vector<int>> q);

LatinSquare parse_latin(std::string_view text);
std::string format_latin(const LatinSquare& q);

// Q(a, b) is b's rank in a's list and n + 1 - Q(a, b) is a's rank in b's.
Instance instance_from_latin(const LatinSquare& q);
// Inverse of instance_from_latin; throws if the ranks do not form one.
LatinSquare latin_from_instance(const Instance& inst);

struct LatinBlocking {
    int man;
    int woman;
};

// Stability test on the rank matrix alone. m must be perfect.
bool latin_stable(const LatinSquare& q, const Assignment& m,
                  std::optional<LatinBlocking>* witness = nullptr);

// {ab : Q(a, b) = i}.
Assignment diagonal_matching(const LatinSquare& q, int i);

// Adds a man and a woman that make the original stable matchings the
// legal ones and leave a single stable matching. Input must be one-to-one
// with complete lists.
Instance auxiliary_instance(const Instance& inst);

// Q(i, j) = ((i - 1) xor (j - 1)) + 1; n must be a power of two.
LatinSquare xor_latin(int n);

}  // namespace schoolchoice
