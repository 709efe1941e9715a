#include "pcurv/matrix.hpp"

#include <utility>

namespace pcurv {

EMat identity(const Field& F, int n, int prec) {
    EMat r(n, n, F.zero(prec));
    for (int i = 0; i < n; ++i) r(i, i) = F.one(prec);
    return r;
}

EMat ezeros(const Field& F, int r, int c, int prec) { return EMat(r, c, F.zero(prec)); }

RMat ridentity(const Field& F, int n) {
    RMat r(n, n, F.rzero());
    for (int i = 0; i < n; ++i) r(i, i) = F.rone();
    return r;
}

RMat rzeros(const Field& F, int r, int c) { return RMat(r, c, F.rzero()); }

namespace {

template <class T, class IsUnit, class Inv>
Mat<T> gauss_inverse(Mat<T> a, Mat<T> r, IsUnit is_unit, Inv inv) {
    int n = a.rows;
    for (int col = 0; col < n; ++col) {
        int piv = -1;
        for (int i = col; i < n; ++i)
            if (is_unit(a(i, col))) { piv = i; break; }
        if (piv < 0) throw Error("NotAUnit", "matrix is not invertible");
        if (piv != col)
            for (int j = 0; j < n; ++j) {
                std::swap(a(piv, j), a(col, j));
                std::swap(r(piv, j), r(col, j));
            }
        T s = inv(a(col, col));
        for (int j = 0; j < n; ++j) {
            a(col, j) = s * a(col, j);
            r(col, j) = s * r(col, j);
        }
        for (int i = 0; i < n; ++i) {
            if (i == col) continue;
            T factor = a(i, col);
            for (int j = 0; j < n; ++j) {
                a(i, j) = a(i, j) - factor * a(col, j);
                r(i, j) = r(i, j) - factor * r(col, j);
            }
        }
    }
    return r;
}

}  // namespace

EMat inverse(const EMat& a) {
    const Field& F = *a.d[0].F;
    int pr = a.d[0].prec;
    for (auto& x : a.d) pr = std::min(pr, x.prec);
    return gauss_inverse(a, identity(F, a.rows, pr), [&](const Elem& x) { return F.is_unit(x); },
                         [&](const Elem& x) { return F.inv(x); });
}

RMat inverse(const RMat& a) {
    const Field& F = *a.d[0].F;
    return gauss_inverse(a, ridentity(F, a.rows), [](const Res& x) { return !x.is_zero(); },
                         [&](const Res& x) { return F.rinv(x); });
}

namespace {

template <class T, class IsUnit, class Inv>
T gauss_det(Mat<T> a, T one, T zero, IsUnit is_unit, Inv inv) {
    // fraction-free over a local ring: pivot on units; a column without unit gives a non-unit det,
    // which we still need exactly, so fall back to Laplace expansion there
    int n = a.rows;
    if (n == 1) return a(0, 0);
    int piv = -1;
    for (int i = 0; i < n; ++i)
        if (is_unit(a(i, 0))) { piv = i; break; }
    if (piv < 0) {
        T acc = zero;
        for (int i = 0; i < n; ++i) {
            Mat<T> minor(n - 1, n - 1, zero);
            for (int r = 0, rr = 0; r < n; ++r) {
                if (r == i) continue;
                for (int c = 1; c < n; ++c) minor(rr, c - 1) = a(r, c);
                ++rr;
            }
            T term = a(i, 0) * gauss_det(minor, one, zero, is_unit, inv);
            acc = (i % 2) ? acc - term : acc + term;
        }
        return acc;
    }
    T sign = one;
    if (piv != 0) {
        for (int j = 0; j < n; ++j) std::swap(a(piv, j), a(0, j));
        sign = zero - one;
    }
    T pv = a(0, 0), ip = inv(pv);
    Mat<T> minor(n - 1, n - 1, zero);
    for (int i = 1; i < n; ++i) {
        T factor = a(i, 0) * ip;
        for (int j = 1; j < n; ++j) minor(i - 1, j - 1) = a(i, j) - factor * a(0, j);
    }
    return sign * pv * gauss_det(minor, one, zero, is_unit, inv);
}

}  // namespace

Elem det(const EMat& a) {
    const Field& F = *a.d[0].F;
    return gauss_det(a, F.one(), F.zero(), [&](const Elem& x) { return F.is_unit(x); },
                     [&](const Elem& x) { return F.inv(x); });
}

Res det(const RMat& a) {
    const Field& F = *a.d[0].F;
    return gauss_det(a, F.rone(), F.rzero(), [](const Res& x) { return !x.is_zero(); },
                     [&](const Res& x) { return F.rinv(x); });
}

RMat residue(const EMat& a) {
    return a.map([](const Elem& x) { return x.F->residue(x); });
}

EMat lift(const Field& F, const RMat& a, int prec) {
    return a.map([&](const Res& x) { return F.lift(x, prec); });
}

EMat apply(const Frob& fr, const EMat& a) {
    return a.map([&](const Elem& x) { return x.F->apply(fr, x); });
}

EMat apply_inv(const Frob& fr, const EMat& a) {
    return a.map([&](const Elem& x) { return x.F->apply_inv(fr, x); });
}

EMat delta(const Frob& fr, const EMat& a) {
    return a.map([&](const Elem& x) { return x.F->delta(fr, x); });
}

EMat mul_pi(const EMat& a, int k) {
    return a.map([&](const Elem& x) { return x.F->mul_pi(x, k); });
}

EMat div_pi(const EMat& a, int k) {
    return a.map([&](const Elem& x) { return x.F->div_pi(x, k); });
}

EMat with_prec(const EMat& a, int prec) {
    return a.map([&](const Elem& x) { return x.F->with_prec(x, prec); });
}

EMat frob_power_entries(const EMat& a, uint64_t k) {
    return a.map([&](const Elem& x) { return x.F->pow(x, k); });
}

RMat rfrob(const RMat& a, int k) {
    return a.map([&](const Res& x) { return x.F->rfrob(x, k); });
}

bool is_symmetric(const EMat& a) {
    for (int i = 0; i < a.rows; ++i)
        for (int j = 0; j < i; ++j)
            if (a(i, j) != a(j, i)) return false;
    return true;
}

bool is_zero(const EMat& a) {
    for (auto& x : a.d)
        if (!x.is_zero()) return false;
    return true;
}

}  // namespace pcurv
