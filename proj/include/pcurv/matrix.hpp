#pragma once

#include <vector>

#include "pcurv/local_field.hpp"

namespace pcurv {

template <class T>
struct Mat {
    int rows = 0, cols = 0;
    std::vector<T> d;

    Mat() = default;
    Mat(int r, int c, const T& fill) : rows(r), cols(c), d((size_t)r * c, fill) {}

    T& operator()(int i, int j) { return d[(size_t)i * cols + j]; }
    const T& operator()(int i, int j) const { return d[(size_t)i * cols + j]; }
    bool operator==(const Mat& o) const { return rows == o.rows && cols == o.cols && d == o.d; }
    bool operator!=(const Mat& o) const { return !(*this == o); }

    template <class Fn>
    auto map(Fn fn) const {
        using U = decltype(fn(d[0]));
        Mat<U> r;
        r.rows = rows;
        r.cols = cols;
        r.d.reserve(d.size());
        for (const auto& x : d) r.d.push_back(fn(x));
        return r;
    }
};

using EMat = Mat<Elem>;
using RMat = Mat<Res>;

template <class T>
Mat<T> transpose(const Mat<T>& a) {
    Mat<T> r(a.cols, a.rows, a.d[0]);
    for (int i = 0; i < a.rows; ++i)
        for (int j = 0; j < a.cols; ++j) r(j, i) = a(i, j);
    return r;
}

template <class T>
Mat<T> operator*(const Mat<T>& a, const Mat<T>& b) {
    Mat<T> r(a.rows, b.cols, a.d[0]);
    for (int i = 0; i < a.rows; ++i)
        for (int j = 0; j < b.cols; ++j) {
            T acc = a(i, 0) * b(0, j);
            for (int k = 1; k < a.cols; ++k) acc = acc + a(i, k) * b(k, j);
            r(i, j) = acc;
        }
    return r;
}

template <class T>
Mat<T> operator+(const Mat<T>& a, const Mat<T>& b) {
    Mat<T> r = a;
    for (size_t i = 0; i < r.d.size(); ++i) r.d[i] = a.d[i] + b.d[i];
    return r;
}

template <class T>
Mat<T> operator-(const Mat<T>& a, const Mat<T>& b) {
    Mat<T> r = a;
    for (size_t i = 0; i < r.d.size(); ++i) r.d[i] = a.d[i] - b.d[i];
    return r;
}

template <class T>
Mat<T> scale(const T& s, const Mat<T>& a) {
    return a.map([&](const T& x) { return s * x; });
}

EMat identity(const Field& F, int n, int prec = -1);
EMat ezeros(const Field& F, int r, int c, int prec = -1);
RMat ridentity(const Field& F, int n);
RMat rzeros(const Field& F, int r, int c);

EMat inverse(const EMat& a);  // throws NotAUnit if det is not a unit
RMat inverse(const RMat& a);
Elem det(const EMat& a);
Res det(const RMat& a);
RMat residue(const EMat& a);
EMat lift(const Field& F, const RMat& a, int prec = -1);
EMat apply(const Frob& fr, const EMat& a);
EMat apply_inv(const Frob& fr, const EMat& a);
EMat delta(const Frob& fr, const EMat& a);
EMat mul_pi(const EMat& a, int k = 1);
EMat div_pi(const EMat& a, int k = 1);
EMat with_prec(const EMat& a, int prec);
EMat frob_power_entries(const EMat& a, uint64_t k);  // entrywise a^k
RMat rfrob(const RMat& a, int k);                    // entrywise x^{p^k}
bool is_symmetric(const EMat& a);
bool is_zero(const EMat& a);

}  // namespace pcurv
