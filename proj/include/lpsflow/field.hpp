#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "lpsflow/errors.hpp"

namespace lpsflow {

/// One scalar per global DoF.
class ScalarField {
public:
    ScalarField() = default;
    explicit ScalarField(std::size_t n, double value = 0.0) : v_(n, value) {}
    explicit ScalarField(std::vector<double> values) : v_(std::move(values)) {}

    std::size_t size() const { return v_.size(); }
    double& operator[](std::size_t i) { return v_[i]; }
    double operator[](std::size_t i) const { return v_[i]; }
    double* data() { return v_.data(); }
    const double* data() const { return v_.data(); }
    std::span<double> span() { return v_; }
    std::span<const double> span() const { return v_; }
    auto begin() { return v_.begin(); }
    auto end() { return v_.end(); }
    auto begin() const { return v_.begin(); }
    auto end() const { return v_.end(); }
    const std::vector<double>& values() const { return v_; }

    void fill(double x) { std::fill(v_.begin(), v_.end(), x); }
    bool all_finite() const {
        return std::all_of(v_.begin(), v_.end(), [](double x) { return std::isfinite(x); });
    }

    ScalarField& operator+=(const ScalarField& o) {
        check(o);
        for (std::size_t i = 0; i < v_.size(); ++i) v_[i] += o.v_[i];
        return *this;
    }
    ScalarField& operator-=(const ScalarField& o) {
        check(o);
        for (std::size_t i = 0; i < v_.size(); ++i) v_[i] -= o.v_[i];
        return *this;
    }
    ScalarField& operator*=(double s) {
        for (auto& x : v_) x *= s;
        return *this;
    }
    /// this += s * o
    void axpy(double s, const ScalarField& o) {
        check(o);
        for (std::size_t i = 0; i < v_.size(); ++i) v_[i] += s * o.v_[i];
    }

private:
    void check(const ScalarField& o) const {
        LPSFLOW_REQUIRE(o.size() == size(), MeshMismatch, "field length mismatch");
    }
    std::vector<double> v_;
};

/// `dim` scalar components on one mesh.
class VectorField {
public:
    VectorField() = default;
    VectorField(int ncomp, std::size_t n) : c_(static_cast<std::size_t>(ncomp), ScalarField(n)) {}

    int ncomp() const { return static_cast<int>(c_.size()); }
    std::size_t size() const { return c_.empty() ? 0 : c_[0].size(); }
    ScalarField& operator[](int k) { return c_[static_cast<std::size_t>(k)]; }
    const ScalarField& operator[](int k) const { return c_[static_cast<std::size_t>(k)]; }

    bool all_finite() const {
        return std::all_of(c_.begin(), c_.end(), [](const ScalarField& f) { return f.all_finite(); });
    }
    void fill(double x) {
        for (auto& f : c_) f.fill(x);
    }
    VectorField& operator+=(const VectorField& o) {
        check(o);
        for (int k = 0; k < ncomp(); ++k) (*this)[k] += o[k];
        return *this;
    }
    VectorField& operator-=(const VectorField& o) {
        check(o);
        for (int k = 0; k < ncomp(); ++k) (*this)[k] -= o[k];
        return *this;
    }
    VectorField& operator*=(double s) {
        for (auto& f : c_) f *= s;
        return *this;
    }
    void axpy(double s, const VectorField& o) {
        check(o);
        for (int k = 0; k < ncomp(); ++k) (*this)[k].axpy(s, o[k]);
    }

private:
    void check(const VectorField& o) const {
        LPSFLOW_REQUIRE(o.ncomp() == ncomp() && o.size() == size(), MeshMismatch, "vector field shape mismatch");
    }
    std::vector<ScalarField> c_;
};

/// Sum with a fixed blocking, so the result does not depend on the worker count.
template <class F>
double blocked_sum(std::size_t n, F&& term) {
    constexpr std::size_t block = 4096;
    std::vector<double> partial((n + block - 1) / block, 0.0);
    for (std::size_t b = 0; b < partial.size(); ++b) {
        const std::size_t end = std::min(n, (b + 1) * block);
        double s = 0.0;
        for (std::size_t i = b * block; i < end; ++i) s += term(i);
        partial[b] = s;
    }
    // pairwise reduction of the partials
    while (partial.size() > 1) {
        std::vector<double> next((partial.size() + 1) / 2);
        for (std::size_t i = 0; i < next.size(); ++i) {
            next[i] = partial[2 * i] + (2 * i + 1 < partial.size() ? partial[2 * i + 1] : 0.0);
        }
        partial.swap(next);
    }
    return partial.empty() ? 0.0 : partial[0];
}

inline double dot(std::span<const double> a, std::span<const double> b) {
    LPSFLOW_REQUIRE(a.size() == b.size(), MeshMismatch, "dot: length mismatch");
    return blocked_sum(a.size(), [&](std::size_t i) { return a[i] * b[i]; });
}

inline double dot(const ScalarField& a, const ScalarField& b) { return dot(a.span(), b.span()); }

inline double dot(const VectorField& a, const VectorField& b) {
    double s = 0.0;
    for (int k = 0; k < a.ncomp(); ++k) s += dot(a[k], b[k]);
    return s;
}

inline double max_abs(const ScalarField& a) {
    double m = 0.0;
    for (double x : a) m = std::max(m, std::abs(x));
    return m;
}

inline double max_abs(const VectorField& a) {
    double m = 0.0;
    for (int k = 0; k < a.ncomp(); ++k) m = std::max(m, max_abs(a[k]));
    return m;
}

} // namespace lpsflow
