#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "diophant/error.hpp"
#include "diophant/rational.hpp"
#include "diophant/real.hpp"

namespace diophant {

// Coefficients ascending: p[0] + p[1] x + p[2] x^2 + ...
using ZPoly = std::vector<mpz_class>;
using QPoly = std::vector<mpq_class>;

namespace poly {

inline void normalize(ZPoly &p) {
    while (!p.empty() && p.back() == 0)
        p.pop_back();
}

inline void normalize(QPoly &p) {
    while (!p.empty() && p.back() == 0)
        p.pop_back();
}

inline int degree(const ZPoly &p) { return static_cast<int>(p.size()) - 1; }
inline int degree(const QPoly &p) { return static_cast<int>(p.size()) - 1; }

inline mpq_class eval(const ZPoly &p, const mpq_class &x) {
    mpq_class acc = 0;
    for (auto it = p.rbegin(); it != p.rend(); ++it)
        acc = acc * x + mpq_class(*it);
    return acc;
}

inline mpq_class eval(const QPoly &p, const mpq_class &x) {
    mpq_class acc = 0;
    for (auto it = p.rbegin(); it != p.rend(); ++it)
        acc = acc * x + *it;
    return acc;
}

inline BigReal eval(const ZPoly &p, const BigReal &x, const RealCtx &ctx) {
    BigReal acc(0L, ctx);
    for (auto it = p.rbegin(); it != p.rend(); ++it)
        acc = add(mul(acc, x, ctx), BigReal(*it, ctx), ctx);
    return acc;
}

inline ZPoly derivative(const ZPoly &p) {
    ZPoly d;
    for (size_t i = 1; i < p.size(); ++i)
        d.push_back(mpz_class(static_cast<long>(i)) * p[i]);
    normalize(d);
    return d;
}

inline ZPoly primitive_part(ZPoly p) {
    normalize(p);
    if (p.empty())
        return p;
    mpz_class g = 0;
    for (const auto &c : p)
        g = gcd(g, c);
    if (g > 1)
        for (auto &c : p)
            c /= g;
    if (p.back() < 0)
        for (auto &c : p)
            c = -c;
    return p;
}

inline QPoly to_q(const ZPoly &p) {
    QPoly q;
    q.reserve(p.size());
    for (const auto &c : p)
        q.emplace_back(c);
    return q;
}

inline QPoly q_rem(QPoly a, const QPoly &b) {
    normalize(a);
    while (degree(a) >= degree(b) && !a.empty()) {
        mpq_class f = a.back() / b.back();
        size_t shift = a.size() - b.size();
        for (size_t i = 0; i < b.size(); ++i)
            a[i + shift] -= f * b[i];
        a.pop_back();
        normalize(a);
    }
    return a;
}

inline QPoly q_gcd(QPoly a, QPoly b) {
    normalize(a);
    normalize(b);
    while (!b.empty()) {
        QPoly r = q_rem(a, b);
        a = std::move(b);
        b = std::move(r);
    }
    if (!a.empty()) {
        mpq_class lead = a.back();
        for (auto &c : a)
            c /= lead;
    }
    return a;
}

inline ZPoly clear_denominators(const QPoly &q) {
    mpz_class den = 1;
    for (const auto &c : q)
        den = lcm(den, c.get_den());
    ZPoly z;
    z.reserve(q.size());
    for (const auto &c : q) {
        mpq_class scaled = c * mpq_class(den);
        z.push_back(scaled.get_num());
    }
    return primitive_part(z);
}

// p with repeated roots collapsed: p / gcd(p, p').
inline ZPoly squarefree_part(const ZPoly &p_in) {
    ZPoly p = primitive_part(p_in);
    if (degree(p) <= 1)
        return p;
    QPoly g = q_gcd(to_q(p), to_q(derivative(p)));
    if (degree(g) <= 0)
        return p;
    // exact division p / g over Q
    QPoly a = to_q(p);
    const QPoly &b = g;
    QPoly quot(a.size() - b.size() + 1, mpq_class(0));
    while (degree(a) >= degree(b) && !a.empty()) {
        mpq_class f = a.back() / b.back();
        size_t shift = a.size() - b.size();
        quot[shift] = f;
        for (size_t i = 0; i < b.size(); ++i)
            a[i + shift] -= f * b[i];
        a.pop_back();
        normalize(a);
    }
    return clear_denominators(quot);
}

// Exact division test: does d divide p over Q?
inline bool divides(const ZPoly &d, const ZPoly &p) {
    if (d.empty())
        return false;
    QPoly r = q_rem(to_q(p), to_q(d));
    return r.empty();
}

inline std::vector<QPoly> sturm_chain(const ZPoly &p) {
    std::vector<QPoly> chain;
    chain.push_back(to_q(p));
    chain.push_back(to_q(derivative(p)));
    while (!chain.back().empty() && degree(chain.back()) > 0) {
        QPoly r = q_rem(chain[chain.size() - 2], chain.back());
        for (auto &c : r)
            c = -c;
        normalize(r);
        if (r.empty())
            break;
        chain.push_back(std::move(r));
    }
    return chain;
}

inline int sign_variations_at(const std::vector<QPoly> &chain, const mpq_class &x) {
    int vars = 0;
    int prev = 0;
    for (const auto &f : chain) {
        if (f.empty())
            continue;
        mpq_class v = eval(f, x);
        int s = sgn(v);
        if (s == 0)
            continue;
        if (prev != 0 && s != prev)
            ++vars;
        prev = s;
    }
    return vars;
}

// Number of distinct real roots in (a, b]; p must be squarefree.
inline int count_roots(const std::vector<QPoly> &chain, const mpq_class &a, const mpq_class &b) {
    return sign_variations_at(chain, a) - sign_variations_at(chain, b);
}

// All coefficients bound: every real root lies in [-B, B].
inline mpq_class cauchy_bound(const ZPoly &p) {
    mpz_class m = 0;
    for (size_t i = 0; i + 1 < p.size(); ++i) {
        mpz_class a = abs(p[i]);
        if (a > m)
            m = a;
    }
    mpq_class b(m, abs(p.back()));
    b.canonicalize();
    return b + 2;
}

struct RootInterval {
    mpq_class lo, hi;   // root in [lo, hi]; lo == hi means exact rational root
    bool exact() const { return lo == hi; }
};

// Isolating intervals for all distinct real roots, ascending.
// Input is made squarefree internally.
inline std::vector<RootInterval> isolate_real_roots(const ZPoly &p_in) {
    ZPoly p = squarefree_part(p_in);
    if (degree(p) < 1)
        return {};
    auto chain = sturm_chain(p);
    mpq_class bound = cauchy_bound(p);
    std::vector<RootInterval> out;
    struct Seg {
        mpq_class a, b;
        int count;
    };
    std::vector<Seg> stack;
    int total = count_roots(chain, -bound, bound);
    if (eval(p, -bound) == 0)
        throw error("cauchy bound not strict"); // cannot happen: bound is strict
    stack.push_back({-bound, bound, total});
    std::vector<RootInterval> found;
    while (!stack.empty()) {
        Seg s = stack.back();
        stack.pop_back();
        if (s.count == 0)
            continue;
        if (s.count == 1) {
            // shrink endpoints off roots: Sturm counting uses (a, b]
            found.push_back({s.a, s.b});
            continue;
        }
        mpq_class m = (s.a + s.b) / 2;
        if (eval(p, m) == 0) {
            found.push_back({m, m});
            // remaining roots strictly inside halves; nudge around m
            mpq_class eps = (s.b - s.a) / 1024;
            mpq_class ml = m - eps, mr = m + eps;
            while (eval(p, ml) == 0)
                ml = (s.a + ml) / 2;
            while (eval(p, mr) == 0)
                mr = (mr + s.b) / 2;
            int left = count_roots(chain, s.a, ml);
            int right = count_roots(chain, mr, s.b);
            if (left > 0)
                stack.push_back({s.a, ml, left});
            if (right > 0)
                stack.push_back({mr, s.b, right});
        } else {
            int left = count_roots(chain, s.a, m);
            int right = s.count - left;
            if (left > 0)
                stack.push_back({s.a, m, left});
            if (right > 0)
                stack.push_back({m, s.b, right});
        }
    }
    std::sort(found.begin(), found.end(),
              [](const RootInterval &a, const RootInterval &b) { return a.lo < b.lo; });
    out = std::move(found);
    return out;
}

// Bisect [lo, hi] until hi - lo <= 2^width_exp. Signs at the endpoints must
// differ (or the root is exact). p squarefree.
inline RootInterval refine_root(const ZPoly &p, RootInterval iv, long width_exp) {
    if (iv.exact())
        return iv;
    mpq_class width_target(1);
    if (width_exp < 0) {
        mpz_class den;
        mpz_ui_pow_ui(den.get_mpz_t(), 2, static_cast<unsigned long>(-width_exp));
        width_target = mpq_class(1, den);
        width_target.canonicalize();
    } else {
        mpz_class num;
        mpz_ui_pow_ui(num.get_mpz_t(), 2, static_cast<unsigned long>(width_exp));
        width_target = mpq_class(num);
    }
    int slo = sgn(eval(p, iv.lo));
    int shi = sgn(eval(p, iv.hi));
    if (slo == 0)
        return {iv.lo, iv.lo};
    if (shi == 0)
        return {iv.hi, iv.hi};
    if (slo == shi)
        throw error("refine_root: endpoints do not bracket a sign change");
    while (iv.hi - iv.lo > width_target) {
        mpq_class m = (iv.lo + iv.hi) / 2;
        int sm = sgn(eval(p, m));
        if (sm == 0)
            return {m, m};
        if (sm == slo)
            iv.lo = m;
        else
            iv.hi = m;
    }
    return iv;
}

// Sturm isolation gives (a, b] style intervals whose endpoints may not show a
// sign change when b sits past the root with no other root in between; walk b
// down until signs bracket.
inline RootInterval bracket(const ZPoly &p, RootInterval iv) {
    if (iv.exact())
        return iv;
    int slo = sgn(eval(p, iv.lo));
    int shi = sgn(eval(p, iv.hi));
    if (slo == 0)
        return {iv.lo, iv.lo};
    if (shi == 0)
        return {iv.hi, iv.hi};
    if (slo != shi)
        return iv;
    throw error("bracket: isolating interval has equal endpoint signs");
}

// Divisors of |n| found by trial division; empty when n has a prime factor
// beyond the effort bound (caller treats that as "unknown").
inline std::optional<std::vector<mpz_class>> divisors_bounded(mpz_class n, unsigned long effort = 1u << 20) {
    n = abs(n);
    if (n == 0)
        return std::nullopt;
    std::vector<std::pair<mpz_class, unsigned>> fact;
    for (mpz_class d = 2; d * d <= n; ++d) {
        if (d > effort)
            return std::nullopt;
        unsigned e = 0;
        while (n % d == 0) {
            n /= d;
            ++e;
        }
        if (e)
            fact.push_back({d, e});
    }
    if (n > 1)
        fact.push_back({n, 1});
    std::vector<mpz_class> divs{1};
    for (const auto &[prime, mult] : fact) {
        size_t base = divs.size();
        mpz_class pk = 1;
        for (unsigned e = 1; e <= mult; ++e) {
            pk *= prime;
            for (size_t i = 0; i < base; ++i)
                divs.push_back(divs[i] * pk);
        }
    }
    return divs;
}

// Exact rational roots (each once), or nullopt when the coefficient
// factorizations exceed the effort bound.
inline std::optional<std::vector<mpq_class>> rational_roots(const ZPoly &p_in) {
    ZPoly p = primitive_part(p_in);
    if (p.empty())
        return std::nullopt;
    if (degree(p) == 0)
        return std::vector<mpq_class>{};
    // x = 0 roots
    std::vector<mpq_class> roots;
    size_t k = 0;
    while (k < p.size() && p[k] == 0)
        ++k;
    if (k > 0) {
        roots.emplace_back(0);
        p.erase(p.begin(), p.begin() + static_cast<long>(k));
    }
    if (degree(p) < 1) {
        return roots;
    }
    auto ds0 = divisors_bounded(p.front());
    auto dsl = divisors_bounded(p.back());
    if (!ds0 || !dsl)
        return std::nullopt;
    for (const auto &num : *ds0) {
        for (const auto &den : *dsl) {
            for (int s : {1, -1}) {
                mpq_class cand(s * num, den);
                cand.canonicalize();
                if (eval(p, cand) == 0) {
                    bool seen = false;
                    for (const auto &r : roots)
                        seen = seen || (r == cand);
                    if (!seen)
                        roots.push_back(cand);
                }
            }
        }
    }
    std::sort(roots.begin(), roots.end());
    return roots;
}

// Deflate: divide out (den*x - num) for each rational root, with multiplicity.
inline ZPoly strip_rational_roots(ZPoly p, const std::vector<mpq_class> &roots) {
    p = primitive_part(p);
    for (const auto &r : roots) {
        ZPoly lin{mpz_class(-r.get_num()), mpz_class(r.get_den())};
        while (degree(p) >= 1 && eval(p, r) == 0) {
            QPoly a = to_q(p);
            QPoly b = to_q(lin);
            QPoly quot(a.size() - b.size() + 1, mpq_class(0));
            while (degree(a) >= degree(b) && !a.empty()) {
                mpq_class f = a.back() / b.back();
                size_t shift = a.size() - b.size();
                quot[shift] = f;
                for (size_t i = 0; i < b.size(); ++i)
                    a[i + shift] -= f * b[i];
                a.pop_back();
                normalize(a);
            }
            if (!a.empty())
                break; // not an exact factor (multiplicity exhausted)
            p = clear_denominators(quot);
        }
    }
    return p;
}

inline std::string to_string(const ZPoly &p) {
    std::string s = "[";
    for (size_t i = 0; i < p.size(); ++i) {
        if (i)
            s += ",";
        s += p[i].get_str();
    }
    return s + "]";
}

} // namespace poly
} // namespace diophant
