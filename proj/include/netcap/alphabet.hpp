#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace netcap {

using Symbol = std::uint8_t;

// A finite alphabet with symbols 0..q-1. Optionally carries finite-field
// structure GF(p^k) with a fixed modulus polynomial per supported q.
// Non-prime-power sizes (q = 6) are plain symbol sets with no arithmetic.
class Alphabet {
public:
    static Alphabet plain(int q);
    static Alphabet field(int q);

    // want_field selects between the two constructors above.
    static Alphabet make(int q, bool want_field);

    int q() const { return q_; }
    bool is_field() const { return field_; }
    int characteristic() const { return p_; }
    int extension_degree() const { return k_; }

    Symbol add(Symbol a, Symbol b) const { return add_[a * q_ + b]; }
    Symbol mul(Symbol a, Symbol b) const { return mul_[a * q_ + b]; }
    Symbol neg(Symbol a) const { return neg_[a]; }

    // Human-readable description of the modulus polynomial, empty for
    // prime fields and plain alphabets.
    const std::string& modulus_description() const { return modulus_desc_; }

private:
    Alphabet() = default;

    int q_ = 0;
    bool field_ = false;
    int p_ = 0;
    int k_ = 0;
    std::vector<Symbol> add_;
    std::vector<Symbol> mul_;
    std::vector<Symbol> neg_;
    std::string modulus_desc_;
};

bool is_prime_power(int q, int* p_out = nullptr, int* k_out = nullptr);

// Mixed-radix helpers: tuples of alphabet symbols are packed big-endian,
// i.e. the first (edge-order-lowest) position is the most significant digit.
long tuple_to_index(const std::vector<Symbol>& tuple, int q);
std::vector<Symbol> index_to_tuple(long index, int q, int arity);

// q^e as a long, throwing on overflow of the configured guard.
long ipow(int q, int e);

}  // namespace netcap
