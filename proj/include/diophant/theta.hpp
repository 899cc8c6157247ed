#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "diophant/error.hpp"
#include "diophant/polynomial.hpp"
#include "diophant/rational.hpp"
#include "diophant/real.hpp"

namespace diophant {

// Prefix of the fixed point of 1 -> 12, 2 -> 1, as digits over {1,2}.
inline std::vector<int> fibonacci_word(size_t n) {
    if (n < 1)
        throw config_error("fibonacci_word needs n >= 1");
    std::vector<int> w{1};
    while (w.size() < n) {
        std::vector<int> next;
        next.reserve(2 * w.size());
        for (int c : w) {
            if (c == 1) {
                next.push_back(1);
                next.push_back(2);
            } else {
                next.push_back(1);
            }
        }
        w = std::move(next);
    }
    w.resize(n);
    return w;
}

// Exact convergent of [0; a_1, ..., a_n].
inline mpq_class cf_convergent(const std::vector<int> &quotients) {
    mpz_class p_prev = 1, q_prev = 0; // index -1
    mpz_class p = 0, q = 1;           // index 0 (a0 = 0)
    for (int a : quotients) {
        mpz_class pn = a * p + p_prev;
        mpz_class qn = a * q + q_prev;
        p_prev = p;
        q_prev = q;
        p = pn;
        q = qn;
    }
    mpq_class r(p, q);
    r.canonicalize();
    return r;
}

// One real number given by a compact text spec:
//   cbrt:N            real cube root of N
//   poly:[c0,...,ck]@i  i-th real root (ascending) of c0 + c1 x + ... + ck x^k
//   cf-fib:N          convergent [0; w_1..w_N], w the Fibonacci word over {1,2}
//   dec:D             exact decimal literal
//   rand:S            uniform bits from a fixed PRNG seeded with S
class ThetaSpec {
  public:
    enum class Kind { algebraic_root, continued_fraction_word, decimal_literal, random_seeded };

    static ThetaSpec parse(const std::string &text) {
        auto colon = text.find(':');
        if (colon == std::string::npos)
            throw config_error("theta spec needs 'kind:payload': " + text);
        std::string kind = text.substr(0, colon);
        std::string payload = text.substr(colon + 1);
        ThetaSpec s;
        s.text_ = text;
        if (kind == "cbrt") {
            mpz_class n(payload);
            if (n == 0)
                throw config_error("cbrt:0 is rational");
            s.kind_ = Kind::algebraic_root;
            s.poly_ = ZPoly{-n, 0, 0, 1};
            s.root_index_ = 0;
        } else if (kind == "poly") {
            s.kind_ = Kind::algebraic_root;
            auto at = payload.rfind('@');
            std::string coeffs = payload;
            s.root_index_ = 0;
            if (at != std::string::npos) {
                coeffs = payload.substr(0, at);
                s.root_index_ = std::stoi(payload.substr(at + 1));
            }
            if (coeffs.size() < 2 || coeffs.front() != '[' || coeffs.back() != ']')
                throw config_error("poly spec needs [c0,c1,...]: " + text);
            std::string body = coeffs.substr(1, coeffs.size() - 2);
            size_t pos = 0;
            while (pos <= body.size()) {
                auto comma = body.find(',', pos);
                std::string item =
                    comma == std::string::npos ? body.substr(pos) : body.substr(pos, comma - pos);
                if (item.empty())
                    throw config_error("empty coefficient in: " + text);
                s.poly_.emplace_back(item);
                if (comma == std::string::npos)
                    break;
                pos = comma + 1;
            }
            poly::normalize(s.poly_);
            if (poly::degree(s.poly_) < 1)
                throw config_error("poly spec must have degree >= 1: " + text);
        } else if (kind == "cf-fib") {
            s.kind_ = Kind::continued_fraction_word;
            long n = std::stol(payload);
            if (n < 1 || n > 100000)
                throw config_error("cf-fib length out of range: " + text);
            s.cf_len_ = static_cast<size_t>(n);
        } else if (kind == "dec") {
            s.kind_ = Kind::decimal_literal;
            s.dec_ = parse_rational(payload);
            s.dec_digits_ = 0;
            for (char c : payload)
                if (c >= '0' && c <= '9')
                    ++s.dec_digits_;
        } else if (kind == "rand") {
            s.kind_ = Kind::random_seeded;
            s.seed_ = std::stoull(payload);
        } else {
            throw config_error("unknown theta kind '" + kind + "' in: " + text);
        }
        return s;
    }

    Kind kind() const { return kind_; }
    const std::string &text() const { return text_; }
    const ZPoly &polynomial() const { return poly_; }
    int root_index() const { return root_index_; }
    size_t cf_length() const { return cf_len_; }
    uint64_t seed() const { return seed_; }
    size_t decimal_digits() const { return dec_digits_; }

    friend bool operator==(const ThetaSpec &a, const ThetaSpec &b) { return a.text_ == b.text_; }

  private:
    Kind kind_ = Kind::decimal_literal;
    std::string text_;
    ZPoly poly_;
    int root_index_ = 0;
    size_t cf_len_ = 0;
    mpq_class dec_;
    size_t dec_digits_ = 0;
    uint64_t seed_ = 0;

    friend class ThetaValue;
};

// Evaluator for one theta: certified enclosures at any precision, exact
// rational access when the spec is rational, cached root refinement.
class ThetaValue {
  public:
    explicit ThetaValue(ThetaSpec spec) : spec_(std::move(spec)) { prepare(); }
    explicit ThetaValue(const std::string &text) : ThetaValue(ThetaSpec::parse(text)) {}

    const ThetaSpec &spec() const { return spec_; }

    // Enclosure with radius below ~2^-(precision+6).
    BigReal eval(const RealCtx &ctx) const {
        std::lock_guard<std::mutex> lock(mu_);
        long p = ctx.precision_bits;
        auto it = cache_.find(p);
        if (it != cache_.end())
            return it->second;
        BigReal v = eval_uncached(ctx);
        cache_.emplace(p, v);
        return v;
    }

    std::optional<mpq_class> exact_rational() const {
        switch (spec_.kind()) {
        case ThetaSpec::Kind::decimal_literal:
            return spec_.dec_;
        case ThetaSpec::Kind::continued_fraction_word:
            return convergent_;
        case ThetaSpec::Kind::algebraic_root:
            if (root_.exact())
                return root_.lo;
            return std::nullopt;
        default:
            return std::nullopt;
        }
    }

    // Degree of the minimal polynomial when certain; (0, false) when only a
    // lower bound of 2 is known (irrational, but possibly reducible spec).
    std::pair<int, bool> algebraic_degree() const {
        if (exact_rational())
            return {1, true};
        if (spec_.kind() != ThetaSpec::Kind::algebraic_root)
            return {0, false};
        int d = poly::degree(stripped_);
        if (d <= 3)
            return {d, true}; // no rational roots left => irreducible for d <= 3
        return {d, false};
    }

    const std::vector<std::string> &warnings() const { return warnings_; }

    // Warn when a decimal literal carries fewer digits than the working
    // precision resolves.
    void check_precision_demand(const RealCtx &ctx, std::vector<std::string> &out) const {
        if (spec_.kind() == ThetaSpec::Kind::decimal_literal) {
            double bits = static_cast<double>(spec_.decimal_digits()) * 3.3219;
            if (bits < static_cast<double>(ctx.precision_bits))
                out.push_back("theta '" + spec_.text() + "' has " +
                              std::to_string(spec_.decimal_digits()) +
                              " digits, below the precision demanded (" +
                              std::to_string(ctx.precision_bits) +
                              " bits); treating the literal as exact");
        }
    }

  private:
    ThetaSpec spec_;
    mutable std::mutex mu_;
    mutable std::map<long, BigReal> cache_;
    mutable poly::RootInterval root_; // algebraic only, refined on demand
    ZPoly squarefree_;
    ZPoly stripped_; // squarefree with rational roots removed
    mpq_class convergent_;
    std::vector<std::string> warnings_;

    void prepare() {
        switch (spec_.kind()) {
        case ThetaSpec::Kind::algebraic_root: {
            squarefree_ = poly::squarefree_part(spec_.poly_);
            auto roots = poly::isolate_real_roots(squarefree_);
            if (roots.empty())
                throw config_error("polynomial has no real root: " + spec_.text());
            if (spec_.root_index_ < 0 || spec_.root_index_ >= static_cast<int>(roots.size()))
                throw config_error("root index out of range (found " +
                                   std::to_string(roots.size()) + " real roots): " + spec_.text());
            root_ = poly::bracket(squarefree_, roots[static_cast<size_t>(spec_.root_index_)]);
            auto rr = poly::rational_roots(squarefree_);
            if (rr) {
                for (const auto &r : *rr)
                    if (root_.lo <= r && r <= root_.hi)
                        root_ = {r, r}; // the isolated root is this rational
                stripped_ = poly::strip_rational_roots(squarefree_, *rr);
            } else {
                stripped_ = squarefree_;
                warnings_.push_back("coefficients too large to certify rational-root"
                                    " stripping for " +
                                    spec_.text());
            }
            if (squarefree_ != spec_.poly_)
                warnings_.push_back("polynomial reduced to squarefree part " +
                                    poly::to_string(squarefree_) + " for " + spec_.text());
            break;
        }
        case ThetaSpec::Kind::continued_fraction_word: {
            auto word = fibonacci_word(spec_.cf_len_);
            convergent_ = cf_convergent(word);
            break;
        }
        default:
            break;
        }
    }

    BigReal eval_uncached(const RealCtx &ctx) const {
        switch (spec_.kind()) {
        case ThetaSpec::Kind::decimal_literal:
            return BigReal(spec_.dec_, ctx);
        case ThetaSpec::Kind::continued_fraction_word:
            return BigReal(convergent_, ctx);
        case ThetaSpec::Kind::random_seeded: {
            // theta = 0.b1 b2 b3 ... with bits from a fixed-seed engine; an
            // evaluation at k words encloses the full infinite stream.
            size_t words = static_cast<size_t>(ctx.precision_bits / 64 + 2);
            std::mt19937_64 rng(spec_.seed_);
            mpz_class acc = 0;
            for (size_t i = 0; i < words; ++i) {
                acc <<= 64;
                acc += mpz_class(static_cast<unsigned long>(rng()));
            }
            long total_bits = static_cast<long>(words) * 64;
            BigReal v(acc, ctx.with_bits(ctx.precision_bits + 64));
            v = mul_2exp(v, -total_bits);
            v = widen_2exp(v, -total_bits); // tail of the stream
            BigReal out(0L, ctx);
            out = add(out, v, ctx);
            return out;
        }
        case ThetaSpec::Kind::algebraic_root: {
            if (root_.exact())
                return BigReal(root_.lo, ctx);
            root_ = poly::refine_root(squarefree_, root_, -(ctx.precision_bits + 8));
            if (root_.exact())
                return BigReal(root_.lo, ctx);
            mpq_class mid = (root_.lo + root_.hi) / 2;
            mpq_class half = (root_.hi - root_.lo) / 2;
            return widen(BigReal(mid, ctx), BigReal(half, RealCtx(64)));
        }
        }
        throw error("unreachable theta kind");
    }
};

} // namespace diophant
