#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <queue>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "diophant/error.hpp"
#include "diophant/forms.hpp"
#include "diophant/intvec.hpp"
#include "diophant/scan.hpp"

namespace diophant {

enum class NormKind { euclid, sup };

inline const char *to_string(NormKind n) { return n == NormKind::euclid ? "euclid" : "sup"; }

inline NormKind norm_from_string(const std::string &s) {
    if (s == "euclid")
        return NormKind::euclid;
    if (s == "sup")
        return NormKind::sup;
    throw config_error("unknown norm '" + s + "'");
}

// norm_key is |x|^2 for the Euclidean norm (exact integer) and max|x_i| for
// the sup norm, so norm comparisons are always exact.
inline mpz_class norm_key_of(const IntVec &x, NormKind n) {
    return n == NormKind::euclid ? x.euclid_sq() : x.sup();
}

inline mpz_class norm_key_limit(long t, NormKind n) {
    mpz_class T(t);
    return n == NormKind::euclid ? mpz_class(T * T) : T;
}

struct MinimalPointRecord {
    size_t nu = 0; // 1-based
    IntVec x;      // sign-normalized: L(x) > 0; primitive
    mpz_class norm_key;
    BigReal X; // |x| enclosure (exact integer for sup norm)
    BigReal L_val, P_val, F_val;
    NormKind norm_kind = NormKind::euclid;
};

struct SequenceDiagnostics {
    std::vector<std::string> notes;
    size_t tie_count = 0;
    bool relation_found = false;    // certified L(x) = 0 within range
    std::optional<IntVec> relation; // the witness
    bool aborted = false;           // precision failure: sequence truncated
    std::string abort_reason;
};

struct MinimalSequence {
    std::string theta_text;                 // theta1 spec text
    std::string theta2_text;                // empty in Theorem-2 mode
    NormKind norm = NormKind::euclid;
    long t_reached = 0;
    long precision_bits = 256;
    std::vector<MinimalPointRecord> records;
    SequenceDiagnostics diag;
    std::shared_ptr<const FormSet> forms;
};

namespace detail {

// A raw candidate vector with lazily certified data.
struct Candidate {
    IntVec x;
    mpz_class norm_key;
    bool zero_L = false;           // certified L(x) = 0 (exact path)
    std::optional<BigReal> absL;   // |L(x)| at base precision
    std::optional<mpq_class> absL_exact;
};

class CandidateJudge {
  public:
    CandidateJudge(const FormSet &fs, const RealCtx &ctx) : fs_(fs), ctx_(ctx), exact_(fs.exact()) {}

    const RealCtx &ctx() const { return ctx_; }
    bool has_exact() const { return exact_.has_value(); }

    void prime(Candidate &c) const {
        if (c.absL)
            return;
        if (exact_) {
            mpq_class v = exact_->eval_L(c.x);
            c.zero_L = (v == 0);
            c.absL_exact = abs(v);
        }
        LinearForm L = fs_.L(ctx_);
        c.absL = abs_enclosure(eval_form(L, c.x, ctx_));
    }

    // three-way |L(a)| vs |L(b)|: -1, 0 (certified equal), +1
    int cmp_absL(Candidate &a, Candidate &b) const {
        prime(a);
        prime(b);
        if (exact_)
            return sgn(*a.absL_exact - *b.absL_exact);
        for (long bits = ctx_.precision_bits; bits <= ctx_.max_precision_bits; bits *= 2) {
            RealCtx c(bits, ctx_.max_precision_bits);
            BigReal la = abs_enclosure(eval_form(fs_.L(c), a.x, c));
            BigReal lb = abs_enclosure(eval_form(fs_.L(c), b.x, c));
            Sign s = sub(la, lb, c).sign();
            if (s == Sign::positive)
                return 1;
            if (s == Sign::negative)
                return -1;
        }
        throw precision_error("undecidable comparison at height " + a.norm_key.get_str() +
                              " between " + a.x.to_string() + " and " + b.x.to_string());
    }

    // certified sign of L(x); zero only through the exact path
    Sign sign_L(Candidate &c) const {
        prime(c);
        if (c.zero_L)
            return Sign::zero_indeterminate;
        if (exact_)
            return exact_->eval_L(c.x) > 0 ? Sign::positive : Sign::negative;
        for (long bits = ctx_.precision_bits; bits <= ctx_.max_precision_bits; bits *= 2) {
            RealCtx cc(bits, ctx_.max_precision_bits);
            Sign s = eval_form(fs_.L(cc), c.x, cc).sign();
            if (s != Sign::zero_indeterminate)
                return s;
        }
        throw precision_error("undecidable sign of L at " + c.x.to_string());
    }

    const FormSet &forms() const { return fs_; }

  private:
    const FormSet &fs_;
    RealCtx ctx_;
    std::optional<ExactForms> exact_;
};

// Sorted-walk extraction of minimal points from a candidate pool.
//
// Soundness relies on the pool property: every vector whose |L| falls below
// the running minimum at its norm is present (the scan prefilter guarantees
// this through its margin; the oracle enumerates everything).  Vectors absent
// from the pool therefore can never become records, and the walk below
// reproduces the definition: x is minimal iff |L(x)| strictly improves on all
// strictly smaller norms and leads its own norm group.
inline std::vector<MinimalPointRecord>
merge_candidates(std::vector<Candidate> &pool, const CandidateJudge &judge, NormKind norm_kind,
                 const mpz_class &key_limit, SequenceDiagnostics &diag) {
    // dedupe identical vectors
    std::sort(pool.begin(), pool.end(), [](const Candidate &a, const Candidate &b) {
        if (a.norm_key != b.norm_key)
            return a.norm_key < b.norm_key;
        return lex_less(a.x, b.x);
    });
    pool.erase(std::unique(pool.begin(), pool.end(),
                           [](const Candidate &a, const Candidate &b) { return a.x == b.x; }),
               pool.end());

    std::vector<MinimalPointRecord> records;
    const RealCtx &ctx = judge.ctx();
    LinearForm L = judge.forms().L(ctx);
    LinearForm P = judge.forms().P(ctx);
    LinearForm F = judge.forms().F(ctx);

    std::optional<size_t> runmin; // index into pool of current minimum
    size_t i = 0;
    while (i < pool.size()) {
        size_t j = i;
        while (j < pool.size() && pool[j].norm_key == pool[i].norm_key)
            ++j;
        if (pool[i].norm_key > key_limit)
            break;
        // group [i, j): find the |L| minimum; certified ties keep lex order
        size_t best = i;
        size_t tie_in_group = 0;
        for (size_t k = i + 1; k < j; ++k) {
            int c = judge.cmp_absL(pool[k], pool[best]);
            if (c < 0) {
                best = k;
                tie_in_group = 0;
            } else if (c == 0) {
                ++tie_in_group; // lex order of the sort already favors pool[best]
            }
        }
        judge.prime(pool[best]);
        if (pool[best].zero_L) {
            diag.relation_found = true;
            diag.relation = pool[best].x;
            diag.notes.push_back("exact linear relation L(x) = 0 at x = " +
                                 pool[best].x.to_string() +
                                 "; sequence of minimal points ends here");
            break;
        }
        bool accept;
        if (!runmin) {
            accept = true;
        } else {
            int c = judge.cmp_absL(pool[best], pool[*runmin]);
            if (c == 0) {
                ++diag.tie_count;
                diag.notes.push_back("certified |L| tie across heights at " +
                                     pool[best].x.to_string() + "; keeping earlier record");
            }
            accept = c < 0;
        }
        if (accept) {
            if (tie_in_group > 0) {
                ++diag.tie_count;
                diag.notes.push_back("certified norm+|L| tie at height key " +
                                     pool[best].norm_key.get_str() + "; keeping lex-smallest " +
                                     pool[best].x.to_string());
            }
            MinimalPointRecord r;
            Sign s = judge.sign_L(pool[best]);
            r.x = s == Sign::negative ? pool[best].x.negated() : pool[best].x;
            r.norm_key = pool[best].norm_key;
            r.norm_kind = norm_kind;
            r.nu = records.size() + 1;
            BigReal nk(r.norm_key, ctx);
            r.X = norm_kind == NormKind::euclid ? sqrt(nk, ctx) : nk;
            r.L_val = eval_form(L, r.x, ctx);
            r.P_val = eval_form(P, r.x, ctx);
            r.F_val = eval_form(F, r.x, ctx);
            if (!r.x.is_primitive())
                throw error("internal: non-primitive minimal point " + r.x.to_string());
            records.push_back(std::move(r));
            runmin = best;
        }
        i = j;
    }
    return records;
}

// Integer hull of -(x1 theta1 + x2 theta2) widened by one on each side:
// all x0 candidates whose |L| could be below 1.
inline void x0_candidates(const FormSet &fs, const RealCtx &ctx, const mpz_class &x1,
                          const mpz_class &x2, std::vector<mpz_class> &out) {
    out.clear();
    auto [t1, t2] = fs.thetas(ctx);
    BigReal u = add(mul_int(t1, x1, ctx), mul_int(t2, x2, ctx), ctx);
    mpz_class lo, hi;
    neg(u).integer_hull(lo, hi);
    if (hi - lo > 8)
        throw precision_error("theta enclosure too wide to locate x0"); // unreachable at >=64 bits
    for (mpz_class k = lo - 1; k <= hi + 1; ++k)
        out.push_back(k);
}

} // namespace detail

// Exhaustive reference enumeration: a plain double loop over (x1, x2) with x0
// restricted to the integers nearest -(x1 theta1 + x2 theta2), certified
// arithmetic throughout, then a running-minimum walk. Quadratic cost: meant
// for T up to ~10^4.
inline MinimalSequence brute_force_oracle(std::shared_ptr<const FormSet> fs, NormKind norm_kind,
                                          long T, const RealCtx &ctx) {
    if (T < 1)
        throw config_error("T must be >= 1");
    MinimalSequence seq;
    seq.theta_text = fs->theta1()->spec().text();
    if (!fs->is_theorem2())
        seq.theta2_text = fs->theta2()->spec().text();
    seq.norm = norm_kind;
    seq.t_reached = T;
    seq.precision_bits = ctx.precision_bits;
    seq.forms = fs;

    mpz_class key_limit = norm_key_limit(T, norm_kind);
    std::vector<detail::Candidate> pool;
    pool.push_back({IntVec(1, 0, 0), norm_key_of(IntVec(1, 0, 0), norm_kind)});

    std::vector<mpz_class> x0s;
    for (long x2 = 0; x2 <= T; ++x2) {
        long x1_begin = (x2 == 0) ? 1 : -T;
        for (long x1 = x1_begin; x1 <= T; ++x1) {
            detail::x0_candidates(*fs, ctx, mpz_class(x1), mpz_class(x2), x0s);
            for (const auto &x0 : x0s) {
                IntVec v(x0, mpz_class(x1), mpz_class(x2));
                if (v.is_zero())
                    continue;
                mpz_class key = norm_key_of(v, norm_kind);
                if (key > key_limit)
                    continue;
                pool.push_back({std::move(v), std::move(key)});
            }
        }
    }

    detail::CandidateJudge judge(*fs, ctx);
    try {
        seq.records = detail::merge_candidates(pool, judge, norm_kind, key_limit, seq.diag);
    } catch (const precision_error &e) {
        seq.diag.aborted = true;
        seq.diag.abort_reason = e.what();
    }
    return seq;
}

// Shell-scan enumeration: expanding square shells over (x1, x2), a vectorized
// prefilter against the running minimum, certified verification of every hit.
// Deterministic for any worker count: hits are re-sorted before verification.
inline MinimalSequence enumerate_minimal_points(std::shared_ptr<const FormSet> fs,
                                                NormKind norm_kind, long T, const RealCtx &ctx,
                                                int workers = 0) {
    if (T < 1)
        throw config_error("T must be >= 1");
    if (T > 50000000L)
        throw config_error("T beyond supported scan range");
    if (workers <= 0) {
        unsigned hc = std::thread::hardware_concurrency();
        workers = hc == 0 ? 1 : static_cast<int>(std::min(hc, 8u));
    }

    MinimalSequence seq;
    seq.theta_text = fs->theta1()->spec().text();
    if (!fs->is_theorem2())
        seq.theta2_text = fs->theta2()->spec().text();
    seq.norm = norm_kind;
    seq.t_reached = T;
    seq.precision_bits = ctx.precision_bits;
    seq.forms = fs;

    RealCtx theta_ctx(192);
    auto [t1r, t2r] = fs->thetas(theta_ctx);
    if (std::abs(t1r.mid_double()) > 1e6 || std::abs(t2r.mid_double()) > 1e6)
        throw config_error("theta magnitude beyond supported scan range");
    detail::ScanTheta st1 = detail::ScanTheta::from(t1r);
    detail::ScanTheta st2 = detail::ScanTheta::from(t2r);
    detail::RowScanner scanner(st1, st2, T);

    mpz_class key_limit = norm_key_limit(T, norm_kind);
    detail::CandidateJudge judge(*fs, ctx);

    std::vector<detail::Candidate> pool;
    pool.push_back({IntVec(1, 0, 0), norm_key_of(IntVec(1, 0, 0), norm_kind)});
    judge.prime(pool[0]);

    // running prefilter bound: certified upper bounds of |L| keyed by norm
    using HeapItem = std::pair<mpz_class, double>; // (norm_key, |L| upper)
    auto heap_cmp = [](const HeapItem &a, const HeapItem &b) { return a.first > b.first; };
    std::priority_queue<HeapItem, std::vector<HeapItem>, decltype(heap_cmp)> pending(heap_cmp);
    pending.push({pool[0].norm_key, pool[0].absL->upper_double()});

    double m_upper = std::numeric_limits<double>::infinity();

    struct RowRun {
        int64_t c, begin, count;
    };
    std::vector<RowRun> runs;
    std::vector<detail::ScanHit> hits;
    std::vector<mpz_class> x0s;

    int64_t s0 = 1;
    while (s0 <= T) {
        int64_t width = s0 < 64 ? 1 : std::max<int64_t>(1, s0 / 4);
        int64_t s1 = std::min<int64_t>(T + 1, s0 + width);

        // admit |L| bounds of every certified candidate with norm <= s0
        mpz_class admit = norm_key_limit(s0, norm_kind);
        while (!pending.empty() && pending.top().first <= admit) {
            m_upper = std::min(m_upper, pending.top().second);
            pending.pop();
        }
        double thr = std::min(0.5, m_upper);

        runs.clear();
        for (int64_t c = s0; c < s1; ++c)
            runs.push_back({c, -(s1 - 1), 2 * (s1 - 1) + 1});
        for (int64_t c = 0; c < s0; ++c) {
            runs.push_back({c, s0, s1 - s0});
            if (c > 0)
                runs.push_back({c, -(s1 - 1), s1 - s0});
        }

        hits.clear();
        if (workers <= 1 || runs.size() < 2) {
            for (const auto &r : runs)
                scanner.scan_row(r.c, r.begin, r.count, thr, hits);
        } else {
            int n = std::min<int>(workers, static_cast<int>(runs.size()));
            std::vector<std::vector<detail::ScanHit>> parts(static_cast<size_t>(n));
            std::vector<std::thread> poolth;
            for (int w = 0; w < n; ++w) {
                poolth.emplace_back([&, w]() {
                    for (size_t ri = static_cast<size_t>(w); ri < runs.size();
                         ri += static_cast<size_t>(n))
                        scanner.scan_row(runs[ri].c, runs[ri].begin, runs[ri].count, thr,
                                         parts[static_cast<size_t>(w)]);
                });
            }
            for (auto &th : poolth)
                th.join();
            for (auto &p : parts)
                hits.insert(hits.end(), p.begin(), p.end());
            std::sort(hits.begin(), hits.end(), [](const detail::ScanHit &a, const detail::ScanHit &b) {
                if (a.x2 != b.x2)
                    return a.x2 < b.x2;
                return a.x1 < b.x1;
            });
        }

        for (const auto &h : hits) {
            detail::x0_candidates(*fs, ctx, mpz_class(h.x1), mpz_class(h.x2), x0s);
            for (const auto &x0 : x0s) {
                IntVec v(x0, mpz_class(h.x1), mpz_class(h.x2));
                if (v.is_zero())
                    continue;
                mpz_class key = norm_key_of(v, norm_kind);
                if (key > key_limit)
                    continue;
                detail::Candidate cand{std::move(v), std::move(key)};
                judge.prime(cand);
                pending.push({cand.norm_key, cand.absL->upper_double()});
                pool.push_back(std::move(cand));
            }
        }
        s0 = s1;
    }

    try {
        seq.records = detail::merge_candidates(pool, judge, norm_kind, key_limit, seq.diag);
    } catch (const precision_error &e) {
        seq.diag.aborted = true;
        seq.diag.abort_reason = e.what();
    }
    return seq;
}

// Empirical exponents of Eq-(sii) type: gamma_j = -log L_j / log X_{j+1}.
inline std::vector<std::pair<size_t, double>> sii_ratios(const MinimalSequence &seq) {
    if (seq.records.size() < 2)
        throw insufficient_data_error("sii_ratios needs at least 2 records, have " +
                                      std::to_string(seq.records.size()));
    RealCtx ctx(seq.precision_bits);
    std::vector<std::pair<size_t, double>> out;
    for (size_t j = 0; j + 1 < seq.records.size(); ++j) {
        const auto &rj = seq.records[j];
        const auto &rn = seq.records[j + 1];
        double logL = log(abs_enclosure(rj.L_val), ctx).mid_double();
        double logX = log(rn.X, ctx).mid_double();
        out.emplace_back(rj.nu, -logL / logX);
    }
    return out;
}

} // namespace diophant
