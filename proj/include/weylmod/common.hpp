#pragma once

#include <complex>
#include <cstddef>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace weylmod {

using cplx = std::complex<double>;
using CVec = std::vector<cplx>;
using RVec = std::vector<double>;

inline constexpr double pi = std::numbers::pi;
inline constexpr double inf = std::numeric_limits<double>::infinity();

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Bad argument or configuration.
struct InvalidArgument : Error {
    using Error::Error;
};

// Sampling problems: aliasing, support outside the grid, tails not decayed.
struct GridError : Error {
    using Error::Error;
};

struct ConvergenceError : Error {
    using Error::Error;
};

struct IoError : Error {
    using Error::Error;
};

inline void require(bool cond, const std::string& msg) {
    if (!cond) throw InvalidArgument(msg);
}

// Integer power of a size, used for n^d array sizes.
inline std::size_t ipow(std::size_t base, int e) {
    std::size_t r = 1;
    for (int i = 0; i < e; ++i) r *= base;
    return r;
}

}  // namespace weylmod
