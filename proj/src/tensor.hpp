#pragma once

// Small helpers for row-major n-dimensional arrays.

#include <vector>

#include "weylmod/common.hpp"

namespace weylmod::detail {

// Multi-index counter over a shape, last axis fastest.
struct Odometer {
    std::vector<int> shape;
    std::vector<int> idx;

    explicit Odometer(std::vector<int> s) : shape(std::move(s)), idx(shape.size(), 0) {}

    void next() {
        for (int a = static_cast<int>(shape.size()) - 1; a >= 0; --a) {
            if (++idx[a] < shape[a]) return;
            idx[a] = 0;
        }
    }
};

// Applies a matrix along one axis of a row-major tensor.
// adjoint = false: m is rows x shape[axis], out = m * in along axis.
// adjoint = true:  m is shape[axis] x rows, out = m^H * in along axis.
inline CVec contract_axis(const CVec& in, const std::vector<int>& shape, int axis, const CVec& m, int rows,
                          bool adjoint) {
    std::size_t outer = 1, inner = 1;
    for (int a = 0; a < axis; ++a) outer *= static_cast<std::size_t>(shape[a]);
    for (std::size_t a = static_cast<std::size_t>(axis) + 1; a < shape.size(); ++a)
        inner *= static_cast<std::size_t>(shape[a]);
    const std::size_t cols = static_cast<std::size_t>(shape[axis]);
    const std::size_t R = static_cast<std::size_t>(rows);
    CVec out(outer * R * inner, cplx(0.0));
    for (std::size_t o = 0; o < outer; ++o) {
        const cplx* src = in.data() + o * cols * inner;
        cplx* dst = out.data() + o * R * inner;
        for (std::size_t r = 0; r < R; ++r) {
            cplx* drow = dst + r * inner;
            for (std::size_t c = 0; c < cols; ++c) {
                const cplx w = adjoint ? std::conj(m[c * R + r]) : m[r * cols + c];
                const cplx* srow = src + c * inner;
                for (std::size_t i = 0; i < inner; ++i) drow[i] += w * srow[i];
            }
        }
    }
    return out;
}

}  // namespace weylmod::detail
