#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include <gmpxx.h>

namespace barcat {

// Exact scalars. Two field backends share the same interface so the whole
// stack can be instantiated over either: arbitrary-precision rationals for
// the identity suites, a prime field for randomized property tests and big
// rank computations.

struct RationalField {
    using Elem = mpq_class;

    static constexpr bool is_prime_field = false;

    Elem zero() const { return Elem(0); }
    Elem one() const { return Elem(1); }
    Elem from_int(long n) const { return Elem(n); }

    Elem add(const Elem& a, const Elem& b) const { return a + b; }
    Elem sub(const Elem& a, const Elem& b) const { return a - b; }
    Elem mul(const Elem& a, const Elem& b) const { return a * b; }
    Elem neg(const Elem& a) const { return -a; }
    Elem inv(const Elem& a) const {
        if (a == 0) throw std::domain_error("division by zero");
        return Elem(1) / a;
    }
    bool is_zero(const Elem& a) const { return a == 0; }
    bool eq(const Elem& a, const Elem& b) const { return a == b; }

    // Bit-exact round-trip format: "num/den" ("num" when den = 1).
    std::string to_string(const Elem& a) const {
        mpq_class c(a);
        c.canonicalize();
        if (c.get_den() == 1) return c.get_num().get_str();
        return c.get_num().get_str() + "/" + c.get_den().get_str();
    }
    Elem parse(const std::string& s) const {
        mpq_class c(s);
        c.canonicalize();
        return c;
    }

    std::string name() const { return "Q"; }
};

struct PrimeField {
    using Elem = std::uint64_t;

    static constexpr bool is_prime_field = true;

    std::uint64_t p;

    explicit PrimeField(std::uint64_t prime = 101) : p(prime) {
        if (p < 2 || !probably_prime(p)) throw std::invalid_argument("field characteristic must be prime");
    }

    static bool probably_prime(std::uint64_t n) {
        if (n < 2) return false;
        for (std::uint64_t d = 2; d * d <= n; ++d)
            if (n % d == 0) return false;
        return true;
    }

    Elem zero() const { return 0; }
    Elem one() const { return 1 % p; }
    Elem from_int(long n) const {
        long r = n % static_cast<long>(p);
        if (r < 0) r += static_cast<long>(p);
        return static_cast<Elem>(r);
    }

    Elem add(Elem a, Elem b) const { return (a + b) % p; }
    Elem sub(Elem a, Elem b) const { return (a + p - b % p) % p; }
    Elem mul(Elem a, Elem b) const { return (a * b) % p; }
    Elem neg(Elem a) const { return a == 0 ? 0 : p - a; }
    Elem inv(Elem a) const {
        if (a == 0) throw std::domain_error("division by zero");
        // extended Euclid
        std::int64_t t = 0, nt = 1;
        std::int64_t r = static_cast<std::int64_t>(p), nr = static_cast<std::int64_t>(a % p);
        while (nr != 0) {
            std::int64_t q = r / nr;
            std::int64_t tmp = t - q * nt;
            t = nt; nt = tmp;
            tmp = r - q * nr;
            r = nr; nr = tmp;
        }
        if (t < 0) t += static_cast<std::int64_t>(p);
        return static_cast<Elem>(t);
    }
    bool is_zero(Elem a) const { return a % p == 0; }
    bool eq(Elem a, Elem b) const { return a % p == b % p; }

    std::string to_string(Elem a) const { return std::to_string(a % p); }
    Elem parse(const std::string& s) const {
        // accept "num/den" rationals and reduce mod p
        auto slash = s.find('/');
        if (slash == std::string::npos) {
            mpz_class n(s);
            mpz_class r = n % static_cast<long>(p);
            long v = r.get_si();
            return from_int(v);
        }
        mpz_class n(s.substr(0, slash)), d(s.substr(slash + 1));
        mpz_class rn = n % static_cast<long>(p), rd = d % static_cast<long>(p);
        Elem en = from_int(rn.get_si()), ed = from_int(rd.get_si());
        return mul(en, inv(ed));
    }

    std::string name() const { return "F" + std::to_string(p); }
};

}  // namespace barcat
