#include "pcurv/connections.hpp"

#include <algorithm>

namespace pcurv {

Elem TorsionSymbol::eval(const Field& F, int k, int i, int j, const std::vector<EMat>* G) const {
    if (kind == Kind::Zero) return F.zero();
    Elem v = beta[k](j, i) - beta[k](i, j);
    if (kind == Kind::Multiplicative && G) {
        int n = (int)beta.size();
        Elem acc = F.zero((*G)[0].d[0].prec);
        for (int m = 0; m < n; ++m) acc = acc + beta[k](j, m) * (*G)[m](k, i) - beta[k](i, m) * (*G)[m](k, j);
        v = v + F.mul_pi(acc);
    }
    return scale ? *scale * v : v;
}

bool TorsionSymbol::vanishes_at_one(const Field& F, int n) const {
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (!F.residue(eval(F, k, i, j, nullptr)).is_zero()) return false;
    return true;
}

TorsionSymbol canonical_torsion(const Field& F, const SymbolTables& T, TorsionSymbol::Kind kind,
                                std::optional<Elem> scale) {
    TorsionSymbol L;
    L.kind = kind;
    L.scale = scale;
    int n = T.n;
    for (int k = 0; k < n; ++k) {
        EMat b = ezeros(F, n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) b(i, j) = F.from_int(T.alpha[k][j][i]);
        L.beta.push_back(b);
    }
    return L;
}

MetricSystem metric_system(const EMat& q, const std::vector<Frob>& lifts, const EMat& a) {
    const Field& F = *q.d[0].F;
    if (lifts.empty()) throw Error("SchemaError", "no Frobenius lifts given");
    int s = lifts[0].s;
    for (auto& fr : lifts)
        if (fr.s != s) throw Error("SchemaError", "all lifts of a connection must have the same degree");
    uint64_t ps = F.ppow(s);
    EMat ap = frob_power_entries(a, ps);
    EMat apt = transpose(ap);
    MetricSystem S;
    for (auto& fr : lifts) S.A.push_back(apt * apply(fr, q) * ap);
    S.B = frob_power_entries(transpose(a) * q * a, ps);
    return S;
}

namespace {

int min_prec(const EMat& m) {
    int p = m.d[0].prec;
    for (auto& x : m.d) p = std::min(p, x.prec);
    return p;
}

// Gaussian elimination over F_p on an augmented system; returns the unique solution
std::vector<int64_t> solve_mod_p(std::vector<std::vector<int64_t>> rows, int unknowns, int64_t p) {
    auto inv = [&](int64_t x) {
        int64_t r = 1, b = x % p, e = p - 2;
        while (e) {
            if (e & 1) r = r * b % p;
            b = b * b % p;
            e >>= 1;
        }
        return r;
    };
    int r = 0;
    std::vector<int> pivcol;
    for (int col = 0; col < unknowns; ++col) {
        int piv = -1;
        for (int i = r; i < (int)rows.size(); ++i)
            if (rows[i][col]) { piv = i; break; }
        if (piv < 0) continue;
        std::swap(rows[r], rows[piv]);
        int64_t s = inv(rows[r][col]);
        for (auto& x : rows[r]) x = x * s % p;
        for (int i = 0; i < (int)rows.size(); ++i) {
            if (i == r || !rows[i][col]) continue;
            int64_t fct = rows[i][col];
            for (int c = 0; c <= unknowns; ++c) rows[i][c] = ((rows[i][c] - fct * rows[r][c]) % p + p) % p;
        }
        pivcol.push_back(col);
        ++r;
    }
    for (int i = r; i < (int)rows.size(); ++i)
        if (rows[i][unknowns]) throw Error("SingularLinearization", "inconsistent digit system");
    if (r != unknowns) throw Error("SingularLinearization", "digit system is not uniquely solvable");
    std::vector<int64_t> x(unknowns);
    for (int i = 0; i < r; ++i) x[pivcol[i]] = rows[i][unknowns];
    return x;
}

// the digit equations as a linear map of the unknown digit H, solved by elimination
std::vector<RMat> eliminate(const Field& F, Flavor flavor, const RMat& Abar, const std::vector<RMat>& P,
                            const std::vector<RMat>& Q, const std::vector<RMat>& T, int n) {
    int N = Abar.rows, f = F.f;
    int U = n * N * N * f;
    auto linear = [&](const std::vector<RMat>& H) {
        std::vector<Res> out;
        for (int i = 0; i < n; ++i) {
            RMat m = transpose(H[i]) * Abar + Abar * H[i];
            for (auto& x : m.d) out.push_back(x);
        }
        if (flavor == Flavor::Chern) {
            for (int i = 0; i < n; ++i) {
                RMat m = Abar * H[i] - transpose(H[i]) * Abar;
                for (auto& x : m.d) out.push_back(x);
            }
        } else {
            for (int m = 0; m < N; ++m)
                for (int i = 0; i < n; ++i)
                    for (int j = 0; j < n; ++j) out.push_back(H[i](m, j) - H[j](m, i));
        }
        return out;
    };
    std::vector<Res> rhs;
    for (int i = 0; i < n; ++i)
        for (auto& x : P[i].d) rhs.push_back(x);
    if (flavor == Flavor::Chern) {
        for (int i = 0; i < n; ++i)
            for (auto& x : Q[i].d) rhs.push_back(x);
    } else {
        for (int m = 0; m < N; ++m)
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) rhs.push_back(T[m](i, j));
    }
    size_t neq = rhs.size() * f;
    std::vector<std::vector<int64_t>> rows(neq, std::vector<int64_t>(U + 1, 0));
    // unknowns are numbered in reverse so the pivot order differs from the closed form
    for (int u = 0; u < U; ++u) {
        int nat = U - 1 - u;
        int b = nat % f, rest = nat / f;
        int c = rest % N, r = (rest / N) % N, i = rest / (N * N);
        std::vector<RMat> H(n, rzeros(F, N, N));
        H[i](r, c).v[b] = 1;
        auto img = linear(H);
        for (size_t e = 0; e < img.size(); ++e)
            for (int t = 0; t < f; ++t) rows[e * f + t][u] = img[e].v[t];
    }
    for (size_t e = 0; e < rhs.size(); ++e)
        for (int t = 0; t < f; ++t) rows[e * f + t][U] = rhs[e].v[t];
    auto x = solve_mod_p(rows, U, F.p);
    std::vector<RMat> H(n, rzeros(F, N, N));
    for (int u = 0; u < U; ++u) {
        int nat = U - 1 - u;
        int b = nat % f, rest = nat / f;
        int c = rest % N, r = (rest / N) % N, i = rest / (N * N);
        H[i](r, c).v[b] = x[u];
    }
    return H;
}

ConnectionAtPoint solve(Flavor flavor, const EMat& q, const TorsionSymbol* L, const std::vector<Frob>& lifts,
                        const EMat& a, SolveMethod method) {
    const Field& F = *q.d[0].F;
    int N = q.rows, n = (int)lifts.size();
    if (q.cols != N || a.rows != N || a.cols != N) throw Error("SchemaError", "metric and point must be N x N");
    if (flavor == Flavor::LeviCivita && n != N) throw Error("SchemaError", "Levi-Civita needs N = n");
    int prec = std::min(min_prec(q), min_prec(a));
    if (prec < 2) throw Error("InsufficientPrecision", "connection solving needs precision >= 2");
    if (!is_symmetric(q)) throw Error("SchemaError", "metric is not symmetric");

    MetricSystem S = metric_system(q, lifts, a);
    std::vector<EMat> C;
    for (auto& A : S.A) C.push_back(div_pi(S.B - A));
    RMat Abar = residue(S.A[0]);
    RMat Ainv;
    try {
        Ainv = inverse(Abar);
    } catch (const Error&) {
        throw Error("SingularLinearization", "metric is not invertible mod pi");
    }
    Res half = F.rinv(F.rint(2));

    std::vector<EMat> G(n, ezeros(F, N, N, prec - 1));
    for (int k = 0; k + 1 < prec; ++k) {
        std::vector<RMat> P(n), Q(n), T;
        for (int i = 0; i < n; ++i) {
            EMat Gt = transpose(G[i]);
            EMat R = C[i] - (Gt * S.A[i] + S.A[i] * G[i] + mul_pi(Gt * S.A[i] * G[i]));
            P[i] = residue(div_pi(R, k));
            if (flavor == Flavor::Chern) Q[i] = residue(div_pi(Gt * S.A[i] - S.A[i] * G[i], k));
        }
        if (flavor == Flavor::LeviCivita) {
            for (int m = 0; m < N; ++m) {
                RMat t = rzeros(F, n, n);
                for (int i = 0; i < n; ++i)
                    for (int j = 0; j < n; ++j) {
                        Elem lhs = F.with_prec(L->eval(F, m, i, j, &G), prec - 1);
                        t(i, j) = F.residue(F.div_pi(lhs - (G[i](m, j) - G[j](m, i)), k));
                    }
                T.push_back(t);
            }
        }

        std::vector<RMat> H;
        if (method == SolveMethod::Elimination) {
            H = eliminate(F, flavor, Abar, P, Q, T, n);
        } else if (flavor == Flavor::Chern) {
            for (int i = 0; i < n; ++i) H.push_back(Ainv * scale(half, P[i] + Q[i]));
        } else {
            // lowered torsion differences Tl_{ijl} = sum_m Abar_{lm} T^m_{ij}
            auto Tl = [&](int i, int j, int l) {
                Res acc = F.rzero();
                for (int m = 0; m < N; ++m) acc = acc + Abar(l, m) * T[m](i, j);
                return acc;
            };
            auto Pv = [&](int i, int j, int l) { return P[i](l, j); };
            for (int i = 0; i < n; ++i) {
                RMat Y = rzeros(F, N, N);
                for (int j = 0; j < n; ++j)
                    for (int l = 0; l < n; ++l)
                        Y(l, j) = half * (Pv(i, j, l) + Pv(j, i, l) - Pv(l, i, j) + Tl(i, j, l) - Tl(i, l, j) - Tl(j, l, i));
                H.push_back(Ainv * Y);
            }
        }
        for (int i = 0; i < n; ++i) G[i] = G[i] + mul_pi(lift(F, H[i], prec - 1), k);
    }

    ConnectionAtPoint c;
    c.flavor = flavor;
    c.point = a;
    c.lifts = lifts;
    c.prec = prec;
    c.G = G;
    for (int i = 0; i < n; ++i) c.lambda.push_back(identity(F, N, prec) + mul_pi(G[i]));
    if (!residual_ok(c, q, L)) throw Error("InternalError", "solver output fails its defining equations");
    return c;
}

}  // namespace

ConnectionAtPoint solve_levi_civita(const EMat& q, const TorsionSymbol& L, const std::vector<Frob>& lifts,
                                    const EMat& a, SolveMethod method) {
    return solve(Flavor::LeviCivita, q, &L, lifts, a, method);
}

ConnectionAtPoint solve_chern(const EMat& q, const std::vector<Frob>& lifts, const EMat& a, SolveMethod method) {
    return solve(Flavor::Chern, q, nullptr, lifts, a, method);
}

bool residual_ok(const ConnectionAtPoint& c, const EMat& q, const TorsionSymbol* L) {
    const Field& F = *q.d[0].F;
    MetricSystem S = metric_system(q, c.lifts, c.point);
    int n = (int)c.lifts.size();
    for (int i = 0; i < n; ++i) {
        const EMat& Lam = c.lambda[i];
        if (!is_zero(with_prec(transpose(Lam) * S.A[i] * Lam - S.B, c.prec))) return false;
        if (c.flavor == Flavor::Chern && !is_zero(with_prec(S.A[i] * Lam - transpose(Lam) * S.A[i], c.prec)))
            return false;
    }
    if (c.flavor == Flavor::LeviCivita) {
        int N = q.rows;
        EMat one = identity(F, N, c.prec);
        for (int k = 0; k < N; ++k)
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) {
                    Elem lhs = (c.lambda[i] - one)(k, j) - (c.lambda[j] - one)(k, i);
                    Elem rhs = F.mul_pi(L->eval(F, k, i, j, &c.G));
                    if (!F.with_prec(lhs - rhs, c.prec).is_zero()) return false;
                }
    }
    return true;
}

std::vector<RMat> lower_indices(const std::vector<RMat>& upper, const RMat& qf) {
    std::vector<RMat> out;
    for (auto& U : upper) out.push_back(transpose(U) * qf);
    return out;
}

std::vector<RMat> raise_indices(const std::vector<RMat>& lower, const RMat& qf) {
    RMat qi = inverse(qf);
    std::vector<RMat> out;
    for (auto& Lw : lower) out.push_back(transpose(Lw * qi));
    return out;
}

ChristoffelModPi christoffel_from_connection(const ConnectionAtPoint& c, const EMat& q) {
    ChristoffelModPi out;
    for (auto& G : c.G) out.upper.push_back(residue(G));
    out.lower = lower_indices(out.upper, rfrob(residue(q), c.lifts[0].s));
    return out;
}

ChristoffelModPi christoffel_lc_mod_pi(const EMat& q, const TorsionSymbol& L, const std::vector<Frob>& lifts) {
    const Field& F = *q.d[0].F;
    int n = q.rows;
    RMat qf = rfrob(residue(q), lifts[0].s);
    std::vector<RMat> dq;
    for (auto& fr : lifts) dq.push_back(residue(delta(fr, q)));
    Res half = F.rinv(F.rint(2));
    auto Lt = [&](int i, int j, int k) {
        Res acc = F.rzero();
        for (int m = 0; m < n; ++m) acc = acc + F.residue(L.eval(F, m, i, j, nullptr)) * qf(m, k);
        return acc;
    };
    ChristoffelModPi out;
    for (int i = 0; i < n; ++i) {
        RMat low = rzeros(F, n, n);
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                low(j, k) = half * (Lt(k, i, j) + Lt(i, j, k) - Lt(j, k, i)) -
                            half * (dq[i](j, k) + dq[j](i, k) - dq[k](i, j));
        out.lower.push_back(low);
    }
    out.upper = raise_indices(out.lower, qf);
    return out;
}

ChristoffelModPi christoffel_chern_mod_pi(const EMat& q, const std::vector<Frob>& lifts) {
    const Field& F = *q.d[0].F;
    RMat qf = rfrob(residue(q), lifts[0].s);
    RMat qi = inverse(qf);
    Res mhalf = F.rneg(F.rinv(F.rint(2)));
    ChristoffelModPi out;
    for (auto& fr : lifts) {
        RMat Gamma = scale(mhalf, residue(delta(fr, q))) * qi;
        out.upper.push_back(transpose(Gamma));
    }
    out.lower = lower_indices(out.upper, qf);
    return out;
}

EMat canonical_secondary_metric(const EMat& q, int h, int t) {
    const Field& F = *q.d[0].F;
    for (int i = 0; i < q.rows; ++i)
        if (!F.is_unit(q(i, i))) throw Error("NonUnitDiagonal", "canonical secondary metrics need unit diagonal");
    return scale(F.pow(q(h, h), (uint64_t)(t - 1)), q);
}

EMat secondary_metric_from_words(const EMat& q, const std::vector<std::vector<int>>& w) {
    const Field& F = *q.d[0].F;
    int n = q.rows;
    EMat r = ezeros(F, n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            Elem acc = F.one();
            for (size_t k = 0; k < w[i].size(); ++k) acc = acc * q(w[i][k], w[j][k]);
            r(i, j) = acc;
        }
    return r;
}

std::vector<std::vector<int>> labeling_words(const Labeling& L, int n, int t) {
    std::vector<std::vector<int>> out;
    for (int i = 0; i < n; ++i) {
        std::vector<int> w;
        for (int r = t - 1; r >= 1; --r) w.push_back(L.gamma.empty() ? 0 : L.gamma[std::min<size_t>(r - 1, L.gamma.size() - 1)]);
        w.push_back(i);
        out.push_back(w);
    }
    return out;
}

BurtaReport verify_prop_burta(const ConnectionAtPoint& c, const std::vector<EMat>& beta) {
    const Field& F = *c.G[0].d[0].F;
    int n = (int)beta.size();
    int pr = c.prec - 1;
    BurtaReport r{true, true, true, true};
    for (int k = 0; k < n; ++k) {
        EMat Gam = ezeros(F, n, n, pr);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) Gam(i, j) = c.G[i](k, j);
        EMat add = with_prec(beta[k] + Gam, pr);
        EMat mul = with_prec(beta[k] + Gam + mul_pi(beta[k] * Gam), pr);
        r.additive_matrix_form = r.additive_matrix_form && is_symmetric(add);
        r.multiplicative_matrix_form = r.multiplicative_matrix_form && is_symmetric(mul);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                Elem lhs = Gam(i, j) - Gam(j, i);
                Elem ell = beta[k](j, i) - beta[k](i, j);
                Elem star = ell;
                Elem acc = F.zero(pr);
                for (int m = 0; m < n; ++m) acc = acc + beta[k](j, m) * c.G[m](k, i) - beta[k](i, m) * c.G[m](k, j);
                star = star + F.mul_pi(acc);
                if (F.with_prec(lhs - ell, pr) != F.zero(pr)) r.additive_symmetric = false;
                if (F.with_prec(lhs - star, pr) != F.zero(pr)) r.multiplicative_symmetric = false;
            }
    }
    return r;
}

}  // namespace pcurv
