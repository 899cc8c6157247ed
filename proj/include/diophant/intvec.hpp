#pragma once

#include <gmpxx.h>

#include <array>
#include <compare>
#include <string>

namespace diophant {

// Exact integer triple (x0, x1, x2).
struct IntVec {
    mpz_class x0, x1, x2;

    IntVec() = default;
    IntVec(mpz_class a, mpz_class b, mpz_class c)
        : x0(std::move(a)), x1(std::move(b)), x2(std::move(c)) {}
    IntVec(long a, long b, long c) : x0(a), x1(b), x2(c) {}

    bool is_zero() const { return x0 == 0 && x1 == 0 && x2 == 0; }

    mpz_class euclid_sq() const { return x0 * x0 + x1 * x1 + x2 * x2; }

    mpz_class sup() const {
        mpz_class m = abs(x0);
        mpz_class a1 = abs(x1);
        mpz_class a2 = abs(x2);
        if (a1 > m)
            m = a1;
        if (a2 > m)
            m = a2;
        return m;
    }

    mpz_class content() const {
        mpz_class g = gcd(gcd(abs(x0), abs(x1)), abs(x2));
        return g;
    }

    bool is_primitive() const { return content() == 1; }

    IntVec negated() const { return IntVec(-x0, -x1, -x2); }

    IntVec cross(const IntVec &o) const {
        return IntVec(x1 * o.x2 - x2 * o.x1, x2 * o.x0 - x0 * o.x2, x0 * o.x1 - x1 * o.x0);
    }

    friend IntVec operator+(const IntVec &a, const IntVec &b) {
        return IntVec(a.x0 + b.x0, a.x1 + b.x1, a.x2 + b.x2);
    }
    friend IntVec operator-(const IntVec &a, const IntVec &b) {
        return IntVec(a.x0 - b.x0, a.x1 - b.x1, a.x2 - b.x2);
    }
    friend IntVec operator*(const mpz_class &t, const IntVec &a) {
        return IntVec(t * a.x0, t * a.x1, t * a.x2);
    }

    friend bool operator==(const IntVec &a, const IntVec &b) {
        return a.x0 == b.x0 && a.x1 == b.x1 && a.x2 == b.x2;
    }

    // Lexicographic on (x0, x1, x2); used only for deterministic tie order.
    friend bool lex_less(const IntVec &a, const IntVec &b) {
        if (a.x0 != b.x0)
            return a.x0 < b.x0;
        if (a.x1 != b.x1)
            return a.x1 < b.x1;
        return a.x2 < b.x2;
    }

    std::string to_string() const {
        return "(" + x0.get_str() + "," + x1.get_str() + "," + x2.get_str() + ")";
    }
};

// det [a; b; c] over the integers.
inline mpz_class det3(const IntVec &a, const IntVec &b, const IntVec &c) {
    return a.x0 * (b.x1 * c.x2 - b.x2 * c.x1) - a.x1 * (b.x0 * c.x2 - b.x2 * c.x0) +
           a.x2 * (b.x0 * c.x1 - b.x1 * c.x0);
}

} // namespace diophant
