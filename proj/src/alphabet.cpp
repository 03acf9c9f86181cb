#include "netcap/alphabet.hpp"

#include <map>

namespace netcap {

namespace {

// Fixed irreducible moduli for the extension fields we support.
// GF(4): a^2 + a + 1, GF(8): a^3 + a + 1, GF(9): a^2 + 1.
// Polynomials are stored as coefficient vectors, lowest degree first,
// without the leading 1.
struct ModulusSpec {
    std::vector<int> low_coeffs;
    const char* text;
};

const std::map<int, ModulusSpec>& moduli() {
    static const std::map<int, ModulusSpec> m = {
        {4, {{1, 1}, "a^2 + a + 1 over GF(2)"}},
        {8, {{1, 1, 0}, "a^3 + a + 1 over GF(2)"}},
        {9, {{1, 0}, "a^2 + 1 over GF(3)"}},
    };
    return m;
}

// Element value <-> polynomial coefficients, little-endian base p.
std::vector<int> to_poly(int v, int p, int k) {
    std::vector<int> c(k);
    for (int i = 0; i < k; ++i) {
        c[i] = v % p;
        v /= p;
    }
    return c;
}

int from_poly(const std::vector<int>& c, int p, int k) {
    int v = 0;
    for (int i = k - 1; i >= 0; --i) v = v * p + c[i];
    return v;
}

}  // namespace

bool is_prime_power(int q, int* p_out, int* k_out) {
    if (q < 2) return false;
    for (int p = 2; p * p <= q; ++p) {
        if (q % p != 0) continue;
        int k = 0;
        int r = q;
        while (r % p == 0) {
            r /= p;
            ++k;
        }
        if (r != 1) return false;
        if (p_out) *p_out = p;
        if (k_out) *k_out = k;
        return true;
    }
    // q itself is prime
    if (p_out) *p_out = q;
    if (k_out) *k_out = 1;
    return true;
}

Alphabet Alphabet::plain(int q) {
    if (q < 2) throw std::invalid_argument("alphabet size must be at least 2");
    Alphabet a;
    a.q_ = q;
    a.field_ = false;
    return a;
}

Alphabet Alphabet::field(int q) {
    int p = 0, k = 0;
    if (!is_prime_power(q, &p, &k))
        throw std::invalid_argument("field alphabet requires a prime power size, got " +
                                    std::to_string(q));
    Alphabet a;
    a.q_ = q;
    a.field_ = true;
    a.p_ = p;
    a.k_ = k;
    a.add_.resize(static_cast<size_t>(q) * q);
    a.mul_.resize(static_cast<size_t>(q) * q);
    a.neg_.resize(q);

    std::vector<int> mod;
    if (k > 1) {
        auto it = moduli().find(q);
        if (it == moduli().end())
            throw std::invalid_argument("no modulus configured for GF(" + std::to_string(q) + ")");
        mod = it->second.low_coeffs;
        a.modulus_desc_ = it->second.text;
    }

    for (int x = 0; x < q; ++x) {
        auto px = to_poly(x, p, k);
        for (int i = 0; i < k; ++i) px[i] = (p - px[i]) % p;
        a.neg_[x] = static_cast<Symbol>(from_poly(px, p, k));
        for (int y = 0; y < q; ++y) {
            auto ax = to_poly(x, p, k);
            auto ay = to_poly(y, p, k);
            std::vector<int> s(k);
            for (int i = 0; i < k; ++i) s[i] = (ax[i] + ay[i]) % p;
            a.add_[x * q + y] = static_cast<Symbol>(from_poly(s, p, k));

            // polynomial product, reduced by the modulus
            std::vector<int> prod(2 * k - 1, 0);
            for (int i = 0; i < k; ++i)
                for (int j = 0; j < k; ++j)
                    prod[i + j] = (prod[i + j] + ax[i] * ay[j]) % p;
            for (int d = 2 * k - 2; d >= k; --d) {
                int c = prod[d];
                if (c == 0) continue;
                prod[d] = 0;
                // a^d = a^(d-k) * a^k = a^(d-k) * (-mod)
                for (int i = 0; i < k; ++i)
                    prod[d - k + i] = ((prod[d - k + i] - c * mod[i]) % p + p * p) % p;
            }
            prod.resize(k);
            a.mul_[x * q + y] = static_cast<Symbol>(from_poly(prod, p, k));
        }
    }
    return a;
}

Alphabet Alphabet::make(int q, bool want_field) {
    return want_field ? field(q) : plain(q);
}

long tuple_to_index(const std::vector<Symbol>& tuple, int q) {
    long idx = 0;
    for (Symbol s : tuple) idx = idx * q + s;
    return idx;
}

std::vector<Symbol> index_to_tuple(long index, int q, int arity) {
    std::vector<Symbol> t(arity);
    for (int i = arity - 1; i >= 0; --i) {
        t[i] = static_cast<Symbol>(index % q);
        index /= q;
    }
    return t;
}

long ipow(int q, int e) {
    long r = 1;
    for (int i = 0; i < e; ++i) {
        if (r > (1L << 56) / q) throw std::overflow_error("tuple space too large");
        r *= q;
    }
    return r;
}

}  // namespace netcap
