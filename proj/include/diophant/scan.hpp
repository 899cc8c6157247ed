#pragma once

#include <cmath>
#include <cstdint>
#include <utility>
#include <vector>

#if defined(__AVX2__)
#include <immintrin.h>
#endif

#include "diophant/real.hpp"

namespace diophant {
namespace detail {

// Double-double helpers (error-free transforms).
struct dd {
    double hi = 0.0, lo = 0.0;
};

inline dd two_sum(double a, double b) {
    double s = a + b;
    double bb = s - a;
    double err = (a - (s - bb)) + (b - bb);
    return {s, err};
}

inline dd dd_add(dd a, dd b) {
    dd s = two_sum(a.hi, b.hi);
    double lo = s.lo + a.lo + b.lo;
    return two_sum(s.hi, lo);
}

inline dd two_prod(double a, double b) {
    double p = a * b;
    double err = std::fma(a, b, -p);
    return {p, err};
}

// a * integer n (|n| < 2^53), a in double-double.
inline dd dd_mul_int(dd a, double n) {
    dd p = two_prod(a.hi, n);
    double lo = std::fma(a.lo, n, p.lo);
    return two_sum(p.hi, lo);
}

// reduce to [0, 1); exact subtraction for |x.hi| < 2^51
inline dd dd_frac(dd x) {
    double f = std::floor(x.hi);
    dd r = two_sum(x.hi - f, x.lo);
    for (int i = 0; i < 2; ++i) {
        if (r.hi < 0.0)
            r = two_sum(r.hi + 1.0, r.lo);
        else if (r.hi >= 1.0)
            r = two_sum(r.hi - 1.0, r.lo);
    }
    return r;
}

inline double frac01(dd x) {
    dd f = dd_frac(x);
    double v = f.hi;
    if (v < 0.0)
        v += 1.0;
    if (v >= 1.0)
        v -= 1.0;
    return v;
}

// One theta coordinate prepared for scanning: value as double-double plus a
// certified bound on |theta - (hi + lo)|.
struct ScanTheta {
    dd value;
    double err = 0.0;

    static ScanTheta from(const BigReal &t) {
        DD d = to_dd(t);
        ScanTheta s;
        s.value = {d.hi, d.lo};
        s.err = d.err;
        return s;
    }
};

struct ScanHit {
    int64_t x1, x2;
};

// Scans rows x2 = c over x1 ranges, flagging every x1 whose distance
// dist(x1 theta1 + c theta2, Z) falls below threshold + margin. The margin
// dominates all float error in the loop, so nothing with true distance
// below `threshold` is ever missed; flagged pairs are re-verified by the
// caller in certified arithmetic.
class RowScanner {
  public:
    RowScanner(ScanTheta theta1, ScanTheta theta2, int64_t t_bound)
        : theta1_(theta1), theta2_(theta2) {
        double theta_err = (theta1_.err + theta2_.err) * static_cast<double>(t_bound + 16) * 2.0;
        // per-lane drift over kBlock steps + lane init rounding + dd slop
        margin_ = 4e-16 * static_cast<double>(kBlock) + theta_err + 1e-11;
    }

    double margin() const { return margin_; }

    void scan_row(int64_t c, int64_t x1_begin, int64_t count, double threshold,
                  std::vector<ScanHit> &out) const {
        if (count <= 0)
            return;
        double thr = threshold + margin_;
        if (thr >= 0.5) {
            for (int64_t i = 0; i < count; ++i)
                out.push_back({x1_begin + i, c});
            return;
        }
        dd base_c = dd_mul_int(theta2_.value, static_cast<double>(c));
        dd step16 = dd_mul_int(theta1_.value, static_cast<double>(kLanes));
        double psi = frac01(step16);

        int64_t steps = (count + kLanes - 1) / kLanes;
        int64_t step = 0;
        double t[kLanes];
        while (step < steps) {
            for (int j = 0; j < kLanes; ++j) {
                int64_t x1 = x1_begin + (step + 0) * kLanes + j;
                t[j] = frac01(dd_add(base_c, dd_mul_int(theta1_.value, static_cast<double>(x1))));
            }
            int64_t chunk = std::min<int64_t>(steps - step, kBlock);
            double lo_min = 1.0, hi_max = 0.0;
#if defined(__AVX2__)
            {
                constexpr int kVecs = kLanes / 4;
                __m256d vt[kVecs], lo[kVecs], hi[kVecs];
                const __m256d vpsi = _mm256_set1_pd(psi);
                const __m256d vone = _mm256_set1_pd(1.0);
                for (int r = 0; r < kVecs; ++r) {
                    vt[r] = _mm256_loadu_pd(t + 4 * r);
                    lo[r] = vone;
                    hi[r] = _mm256_setzero_pd();
                }
                for (int64_t s = 0; s < chunk; ++s) {
#pragma GCC unroll 8
                    for (int r = 0; r < kVecs; ++r) {
                        lo[r] = _mm256_min_pd(lo[r], vt[r]);
                        hi[r] = _mm256_max_pd(hi[r], vt[r]);
                        __m256d v = _mm256_add_pd(vt[r], vpsi);
                        v = _mm256_sub_pd(v, _mm256_and_pd(_mm256_cmp_pd(v, vone, _CMP_GE_OQ), vone));
                        vt[r] = v;
                    }
                }
                __m256d rlo = lo[0], rhi = hi[0];
                for (int r = 1; r < kVecs; ++r) {
                    rlo = _mm256_min_pd(rlo, lo[r]);
                    rhi = _mm256_max_pd(rhi, hi[r]);
                }
                alignas(32) double lov[4], hiv[4];
                _mm256_store_pd(lov, rlo);
                _mm256_store_pd(hiv, rhi);
                for (int j = 0; j < 4; ++j) {
                    lo_min = std::min(lo_min, lov[j]);
                    hi_max = std::max(hi_max, hiv[j]);
                }
            }
#else
            {
                double mn[kLanes], mx[kLanes];
                for (int j = 0; j < kLanes; ++j) {
                    mn[j] = 1.0;
                    mx[j] = 0.0;
                }
                for (int64_t s = 0; s < chunk; ++s) {
#pragma GCC ivdep
                    for (int j = 0; j < kLanes; ++j) {
                        double v = t[j];
                        mn[j] = v < mn[j] ? v : mn[j];
                        mx[j] = v > mx[j] ? v : mx[j];
                        v += psi;
                        v -= (v >= 1.0) ? 1.0 : 0.0;
                        t[j] = v;
                    }
                }
                for (int j = 0; j < kLanes; ++j) {
                    lo_min = std::min(lo_min, mn[j]);
                    hi_max = std::max(hi_max, mx[j]);
                }
            }
#endif
            if (lo_min < thr || hi_max > 1.0 - thr) {
                int64_t first = x1_begin + step * kLanes;
                int64_t last_excl =
                    std::min<int64_t>(x1_begin + (step + chunk) * kLanes, x1_begin + count);
                rescan(base_c, c, first, last_excl, thr, out);
            }
            step += chunk;
        }
    }

  private:
    static constexpr int kLanes = 32;
    static constexpr int64_t kBlock = 512; // steps per lane between refreshes

    ScanTheta theta1_, theta2_;
    double margin_ = 0.0;

    void rescan(dd base_c, int64_t c, int64_t first, int64_t last_excl, double thr,
                std::vector<ScanHit> &out) const {
        for (int64_t x1 = first; x1 < last_excl; ++x1) {
            dd u = dd_add(base_c, dd_mul_int(theta1_.value, static_cast<double>(x1)));
            double v = frac01(u);
            double dist = std::min(v, 1.0 - v);
            if (dist < thr)
                out.push_back({x1, c});
        }
    }
};

} // namespace detail
} // namespace diophant
