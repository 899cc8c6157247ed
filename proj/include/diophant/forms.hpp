#pragma once

#include <array>
#include <map>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "diophant/error.hpp"
#include "diophant/intvec.hpp"
#include "diophant/rational.hpp"
#include "diophant/real.hpp"
#include "diophant/theta.hpp"

namespace diophant {

// Linear form c0 x0 + c1 x1 + c2 x2 with enclosure coefficients.
struct LinearForm {
    BigReal c0, c1, c2;

    static LinearForm unit(int axis, const RealCtx &ctx) {
        LinearForm f{BigReal(0L, ctx), BigReal(0L, ctx), BigReal(0L, ctx)};
        (axis == 0 ? f.c0 : axis == 1 ? f.c1 : f.c2) = BigReal(1L, ctx);
        return f;
    }
};

inline BigReal mul_int(const BigReal &a, const mpz_class &z, const RealCtx &ctx) {
    return mul(a, BigReal(z, ctx), ctx);
}

inline BigReal eval_form(const LinearForm &f, const IntVec &x, const RealCtx &ctx) {
    BigReal acc = mul_int(f.c0, x.x0, ctx);
    acc = add(acc, mul_int(f.c1, x.x1, ctx), ctx);
    acc = add(acc, mul_int(f.c2, x.x2, ctx), ctx);
    return acc;
}

// 3x3 determinant of coefficient rows, expanded along the first row so that
// minors of exact rows (unit forms, exact P) stay exact and a structural zero
// is detected as exact zero rather than burning precision.
inline BigReal coefficient_det(const LinearForm &l, const LinearForm &p, const LinearForm &f,
                               const RealCtx &ctx) {
    auto minor = [&](const BigReal &a, const BigReal &b, const BigReal &c, const BigReal &d) {
        return sub(mul(a, d, ctx), mul(b, c, ctx), ctx);
    };
    BigReal m0 = minor(p.c1, p.c2, f.c1, f.c2);
    BigReal m1 = minor(p.c0, p.c2, f.c0, f.c2);
    BigReal m2 = minor(p.c0, p.c1, f.c0, f.c1);
    BigReal acc = mul(l.c0, m0, ctx);
    acc = sub(acc, mul(l.c1, m1, ctx), ctx);
    acc = add(acc, mul(l.c2, m2, ctx), ctx);
    return acc;
}

// Exact rational coefficient rows, available when every theta involved is
// exactly rational. Drives the exact comparison fallback.
struct ExactForms {
    std::array<mpq_class, 3> L, P, F;

    mpq_class eval_L(const IntVec &x) const { return dot(L, x); }
    mpq_class eval_P(const IntVec &x) const { return dot(P, x); }
    mpq_class eval_F(const IntVec &x) const { return dot(F, x); }

    static mpq_class dot(const std::array<mpq_class, 3> &c, const IntVec &x) {
        return c[0] * mpq_class(x.x0) + c[1] * mpq_class(x.x1) + c[2] * mpq_class(x.x2);
    }
};

// The bundle of forms for one run: L = (1, theta1, theta2), P either the
// Theorem-2 derivative pair (0, 1, 2 theta) or user coefficients, F a unit
// coordinate form with certified nonzero determinant.
class FormSet {
  public:
    // Theorem-2 mode: theta2 = theta^2, P = formal derivative of L's
    // coefficient polynomial in theta.
    static FormSet theorem2(std::shared_ptr<ThetaValue> theta) {
        FormSet fs;
        fs.theta1_ = std::move(theta);
        fs.mode_ = Mode::theorem2;
        return fs;
    }

    static FormSet general(std::shared_ptr<ThetaValue> theta1, std::shared_ptr<ThetaValue> theta2,
                           std::array<mpq_class, 3> p_coeffs) {
        bool all_zero = p_coeffs[0] == 0 && p_coeffs[1] == 0 && p_coeffs[2] == 0;
        if (all_zero)
            throw config_error("P form must not be identically zero");
        FormSet fs;
        fs.theta1_ = std::move(theta1);
        fs.theta2_ = std::move(theta2);
        fs.p_coeffs_ = std::move(p_coeffs);
        fs.mode_ = Mode::general;
        return fs;
    }

    bool is_theorem2() const { return mode_ == Mode::theorem2; }
    const std::shared_ptr<ThetaValue> &theta1() const { return theta1_; }
    const std::shared_ptr<ThetaValue> &theta2() const { return theta2_; }

    // Enclosures of (theta1, theta2) at context precision.
    std::pair<BigReal, BigReal> thetas(const RealCtx &ctx) const {
        BigReal t1 = theta1_->eval(ctx);
        if (mode_ == Mode::theorem2)
            return {t1, mul(t1, t1, ctx)};
        return {t1, theta2_->eval(ctx)};
    }

    LinearForm L(const RealCtx &ctx) const {
        auto [t1, t2] = thetas(ctx);
        return LinearForm{BigReal(1L, ctx), t1, t2};
    }

    LinearForm P(const RealCtx &ctx) const {
        if (mode_ == Mode::theorem2) {
            BigReal t1 = theta1_->eval(ctx);
            // derivative of the coefficient polynomial 1 + y + y^2 evaluation
            // pattern (1, theta, theta^2) -> (0, 1, 2 theta)
            return LinearForm{BigReal(0L, ctx), BigReal(1L, ctx),
                              mul(BigReal(2L, ctx), t1, ctx)};
        }
        return LinearForm{BigReal(p_coeffs_[0], ctx), BigReal(p_coeffs_[1], ctx),
                          BigReal(p_coeffs_[2], ctx)};
    }

    // First of e2, e1, e0 whose determinant with L, P is certified nonzero.
    LinearForm F(const RealCtx &ctx) const {
        int axis = f_axis(ctx);
        return LinearForm::unit(axis, ctx);
    }

    int f_axis(const RealCtx &ctx) const {
        if (f_axis_cache_ >= 0)
            return f_axis_cache_;
        if (mode_ == Mode::theorem2) {
            f_axis_cache_ = 2; // det(L, P, e2) = 1 exactly
            return f_axis_cache_;
        }
        for (int axis : {2, 1, 0}) {
            LinearForm cand = LinearForm::unit(axis, ctx);
            bool decided = false;
            try {
                Sign s = with_escalation(ctx, [&](const RealCtx &c) {
                    BigReal d = coefficient_det(L(c), P(c), cand, c);
                    if (d.is_exact_zero())
                        return Sign::zero_indeterminate; // structurally zero
                    Sign sig = d.sign();
                    if (sig == Sign::zero_indeterminate)
                        throw escalation_request{"coefficient det axis " + std::to_string(axis)};
                    return sig;
                });
                decided = (s != Sign::zero_indeterminate);
            } catch (const precision_error &) {
                decided = false;
            }
            if (decided) {
                f_axis_cache_ = axis;
                return axis;
            }
        }
        throw precision_error("independence undecidable: no coordinate form has a "
                              "certified nonzero determinant with L and P");
    }

    // Coefficient determinant A for the chosen F.
    BigReal A(const RealCtx &ctx) const { return coefficient_det(L(ctx), P(ctx), F(ctx), ctx); }

    std::optional<ExactForms> exact() const {
        auto q1 = theta1_->exact_rational();
        if (!q1)
            return std::nullopt;
        ExactForms ef;
        if (mode_ == Mode::theorem2) {
            ef.L = {mpq_class(1), *q1, (*q1) * (*q1)};
            ef.P = {mpq_class(0), mpq_class(1), 2 * (*q1)};
        } else {
            auto q2 = theta2_->exact_rational();
            if (!q2)
                return std::nullopt;
            ef.L = {mpq_class(1), *q1, *q2};
            ef.P = p_coeffs_;
        }
        int axis = f_axis(RealCtx());
        ef.F = {mpq_class(0), mpq_class(0), mpq_class(0)};
        ef.F[static_cast<size_t>(axis)] = 1;
        return ef;
    }

    // Heuristic refuter for the independence assumption: searches small
    // integer relations |m0 + m1 theta1 + m2 theta2| < 2^(-precision/2).
    // A nonempty result refutes (or strongly suspects) (ine); it can never
    // confirm it.
    std::vector<IntVec> refute_independence(const RealCtx &ctx, long m_bound = 32) const {
        std::vector<IntVec> hits;
        auto [t1, t2] = thetas(ctx);
        auto ex = exact();
        long thr_exp = -(ctx.precision_bits / 2);
        for (long m1 = -m_bound; m1 <= m_bound; ++m1) {
            for (long m2 = -m_bound; m2 <= m_bound; ++m2) {
                BigReal u = add(mul(BigReal(m1, ctx), t1, ctx), mul(BigReal(m2, ctx), t2, ctx), ctx);
                mpz_class lo, hi;
                u.integer_hull(lo, hi);
                if (hi - lo > 4)
                    continue; // cannot locate u; skip (pathological radius)
                for (mpz_class k = lo; k <= hi + 1; ++k) {
                    mpz_class m0 = -k;
                    if (m0 == 0 && m1 == 0 && m2 == 0)
                        continue;
                    if (abs(m0) > m_bound)
                        continue;
                    BigReal r = add(u, BigReal(m0, ctx), ctx);
                    bool small = abs_enclosure(r).certainly_below_2exp(thr_exp);
                    bool exact_zero = false;
                    if (ex) {
                        mpq_class v = ef_eval(*ex, m0, m1, m2);
                        exact_zero = (v == 0);
                        small = small || exact_zero;
                        if (!exact_zero && small)
                            small = false; // exact path says it is not a relation
                    }
                    if (small) {
                        IntVec m(m0, mpz_class(m1), mpz_class(m2));
                        if (canonical_relation(m))
                            hits.push_back(m);
                    }
                }
            }
        }
        return hits;
    }

  private:
    enum class Mode { theorem2, general };
    Mode mode_ = Mode::theorem2;
    std::shared_ptr<ThetaValue> theta1_;
    std::shared_ptr<ThetaValue> theta2_;
    std::array<mpq_class, 3> p_coeffs_{};
    mutable int f_axis_cache_ = -1;

    static mpq_class ef_eval(const ExactForms &ef, const mpz_class &m0, long m1, long m2) {
        return ef.L[0] * mpq_class(m0) + ef.L[1] * mpq_class(m1) + ef.L[2] * mpq_class(m2);
    }

    // keep one representative of +-m, content 1
    static bool canonical_relation(const IntVec &m) {
        if (!m.is_primitive())
            return false;
        if (m.x0 != 0)
            return m.x0 > 0;
        if (m.x1 != 0)
            return m.x1 > 0;
        return m.x2 > 0;
    }
};

} // namespace diophant
