#pragma once

#include <optional>
#include <string>
#include <vector>

#include "diophant/error.hpp"
#include "diophant/minimal_points.hpp"

namespace diophant {

// Classification of the triple (x_{j-1}, x_j, x_{j+1}), 2 <= j <= len-1.
struct TripleClass {
    size_t j = 0; // index of the middle record (1-based nu)
    bool independent = false;
    mpz_class det3; // exact determinant of the integer row matrix
    std::optional<mpz_class> t; // recursion coefficient when dependent
};

// Maximal run of consecutive minimal points inside one planar lattice,
// bounded by independent triples at nu and k.
struct DependentRun {
    size_t nu = 0;
    size_t k = 0;
    // basis (x_nu, x_{nu+1}) of the run's two-dimensional lattice
};

inline std::vector<TripleClass> classify_triples(const MinimalSequence &seq) {
    if (seq.records.size() < 3)
        throw insufficient_data_error("classify_triples needs >= 3 records, have " +
                                      std::to_string(seq.records.size()));
    std::vector<TripleClass> out;
    for (size_t j = 1; j + 1 < seq.records.size(); ++j) {
        const IntVec &a = seq.records[j - 1].x;
        const IntVec &b = seq.records[j].x;
        const IntVec &c = seq.records[j + 1].x;
        TripleClass tc;
        tc.j = seq.records[j].nu;
        tc.det3 = det3(a, b, c);
        tc.independent = tc.det3 != 0;
        if (!tc.independent) {
            // Lemma-1 shape: c = t b + a, solved by exact division on any
            // nonzero component of b and verified on all three.
            IntVec d = c - a;
            std::optional<mpz_class> t;
            const mpz_class *bc[3] = {&b.x0, &b.x1, &b.x2};
            const mpz_class *dc[3] = {&d.x0, &d.x1, &d.x2};
            for (int i = 0; i < 3 && !t; ++i) {
                if (*bc[i] != 0) {
                    if (!mpz_divisible_p(dc[i]->get_mpz_t(), bc[i]->get_mpz_t()))
                        break;
                    t = *dc[i] / *bc[i];
                }
            }
            if (t) {
                IntVec check = c - (*t * b) - a;
                if (!check.is_zero())
                    t.reset();
            }
            if (!t)
                throw error("dependent triple at j=" + std::to_string(tc.j) +
                            " is not of the form x_{j+1} = t x_j + x_{j-1}");
            tc.t = *t;
        }
        out.push_back(std::move(tc));
    }
    return out;
}

// Exact 2-d lattice membership: x = a u + b v with integers a, b.
inline bool in_integer_span(const IntVec &u, const IntVec &v, const IntVec &x) {
    // solve over Q by Cramer on two independent coordinate pairs of (u, v)
    IntVec w = u.cross(v);
    if (w.is_zero())
        return false; // degenerate basis
    // pick the coordinate to drop: the one of the largest cross component
    int drop = 0;
    mpz_class best = abs(w.x0);
    if (abs(w.x1) > best) {
        drop = 1;
        best = abs(w.x1);
    }
    if (abs(w.x2) > best)
        drop = 2;
    auto comp = [](const IntVec &z, int i) -> const mpz_class & {
        return i == 0 ? z.x0 : i == 1 ? z.x1 : z.x2;
    };
    int i1 = drop == 0 ? 1 : 0;
    int i2 = drop == 2 ? 1 : 2;
    mpz_class det = comp(u, i1) * comp(v, i2) - comp(u, i2) * comp(v, i1);
    if (det == 0)
        return false;
    mpz_class na = comp(x, i1) * comp(v, i2) - comp(x, i2) * comp(v, i1);
    mpz_class nb = comp(u, i1) * comp(x, i2) - comp(u, i2) * comp(x, i1);
    if (!mpz_divisible_p(na.get_mpz_t(), det.get_mpz_t()) ||
        !mpz_divisible_p(nb.get_mpz_t(), det.get_mpz_t()))
        return false;
    mpz_class a = na / det, b = nb / det;
    IntVec rec = a * u + b * v;
    // the dropped coordinate must agree too
    return rec == x;
}

// Maximal runs between consecutive independent triples. Interior membership
// in the lattice spanned by (x_nu, x_{nu+1}) is verified exactly; a violation
// would contradict the Lemma-1 recursion and aborts as a software fault.
inline std::vector<DependentRun> segment_runs(const MinimalSequence &seq,
                                              const std::vector<TripleClass> &classes) {
    if (classes.empty())
        throw insufficient_data_error("segment_runs needs a nonempty classification");
    std::vector<size_t> indep;
    for (const auto &c : classes)
        if (c.independent)
            indep.push_back(c.j);
    std::vector<DependentRun> runs;
    for (size_t i = 0; i + 1 < indep.size(); ++i) {
        DependentRun r;
        r.nu = indep[i];
        r.k = indep[i + 1];
        const IntVec &u = seq.records[r.nu - 1].x; // nu is 1-based
        const IntVec &v = seq.records[r.nu].x;
        for (size_t j = r.nu; j <= r.k; ++j) {
            const IntVec &x = seq.records[j - 1].x;
            if (!in_integer_span(u, v, x))
                throw error("run integrity violation: x_" + std::to_string(j) +
                            " outside the lattice of (x_" + std::to_string(r.nu) + ", x_" +
                            std::to_string(r.nu + 1) + ")");
        }
        runs.push_back(r);
    }
    return runs;
}

// Delta_j: determinant of the (L, P, F) value rows at j-1, j, j+1, plus the
// exact integer determinant. The identity Delta_j = A det3 ties the two.
inline std::pair<BigReal, mpz_class> delta(const MinimalSequence &seq, size_t j,
                                           const RealCtx &ctx) {
    if (j < 2 || j + 1 > seq.records.size())
        throw config_error("delta index out of range");
    const auto &r0 = seq.records[j - 2];
    const auto &r1 = seq.records[j - 1];
    const auto &r2 = seq.records[j];
    auto minor2 = [&](const BigReal &a, const BigReal &b, const BigReal &c, const BigReal &d) {
        return sub(mul(a, d, ctx), mul(b, c, ctx), ctx);
    };
    BigReal m0 = minor2(r1.P_val, r1.F_val, r2.P_val, r2.F_val);
    BigReal m1 = minor2(r1.L_val, r1.F_val, r2.L_val, r2.F_val);
    BigReal m2 = minor2(r1.L_val, r1.P_val, r2.L_val, r2.P_val);
    BigReal d = mul(r0.L_val, m0, ctx);
    d = sub(d, mul(r0.P_val, m1, ctx), ctx);
    d = add(d, mul(r0.F_val, m2, ctx), ctx);
    mpz_class dz = det3(r0.x, r1.x, r2.x);
    return {d, dz};
}

// Both sides enclose the same exact number, so the enclosures must overlap.
inline bool delta_identity_holds(const BigReal &delta_val, const BigReal &A, const mpz_class &dz,
                                 const RealCtx &ctx) {
    BigReal prod = mul(A, BigReal(dz, ctx), ctx);
    return sub(delta_val, prod, ctx).contains_zero();
}

// W_j = L_j P_{j+1} - L_{j+1} P_j.
inline BigReal wronskian(const MinimalSequence &seq, size_t j, const RealCtx &ctx) {
    if (j < 1 || j + 1 > seq.records.size())
        throw config_error("wronskian index out of range");
    const auto &a = seq.records[j - 1];
    const auto &b = seq.records[j];
    return sub(mul(a.L_val, b.P_val, ctx), mul(b.L_val, a.P_val, ctx), ctx);
}

struct JarnikRow {
    size_t j = 0;
    double growth = 0.0; // log X_{j+1} / log X_j
    double decay = 0.0;  // -log L_j / log X_j
};

// Ratios behind the Jarnik inequalities at independent triples. Constants in
// the paper's >> / << are unknowable, so this reports ratios and enforces
// nothing.
inline std::vector<JarnikRow> jarnik_report(const MinimalSequence &seq,
                                            const std::vector<TripleClass> &classes,
                                            size_t burn_in = 3) {
    RealCtx ctx(seq.precision_bits);
    std::vector<JarnikRow> out;
    for (const auto &c : classes) {
        if (!c.independent || c.j <= burn_in)
            continue;
        const auto &rj = seq.records[c.j - 1];
        const auto &rn = seq.records[c.j];
        double logXj = log(rj.X, ctx).mid_double();
        if (logXj <= 0)
            continue; // X_j = 1: ratios undefined at the head record
        double logXn = log(rn.X, ctx).mid_double();
        double logLj = log(abs_enclosure(rj.L_val), ctx).mid_double();
        out.push_back({c.j, logXn / logXj, -logLj / logXj});
    }
    return out;
}

} // namespace diophant
