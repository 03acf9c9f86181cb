#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "netcap/coding.hpp"
#include "netcap/network.hpp"

namespace netcap {

enum class FeasStatus { Feasible, Infeasible, Timeout };

const char* to_string(FeasStatus s);

struct SearchOptions {
    bool routing_fix = true;     // fix single-input vertices to replication
    bool symmetry_break = true;  // emissions assigned in increasing order
    bool linear_only = false;    // restrict tables to matrix-induced maps
    double time_limit_s = 0.0;   // 0 = unlimited
    int threads = 1;             // > 1 splits the root branching across OpenMP
};

struct SearchResult {
    FeasStatus status = FeasStatus::Infeasible;
    std::optional<Certificate> certificate;
    std::uint64_t nodes = 0;
    double wall_ms = 0.0;
    // deepest fully consistent codeword prefix seen (a valid smaller code)
    int best_prefix_size = 0;
    std::optional<Certificate> best_prefix_certificate;
};

// Exact decision: does an unambiguous (outer code of size M, network code)
// pair exist for (n, a) under the option restrictions? Searches the semantic
// space (source emissions and function-table entries) directly.
SearchResult decide_feasible(const Network& n, const Alphabet& a, int M,
                             const SearchOptions& opts = {});

// Serial reference implementation; decide_feasible with threads > 1 must
// return the same status (kept separate for testing and benchmarks).
SearchResult decide_feasible_serial(const Network& n, const Alphabet& a, int M,
                                    const SearchOptions& opts = {});

struct CapacityOptions {
    SearchOptions search;
    // apply the supersource transform for the top M = q^mu probe when
    // |out(S)| > mu; the report records whether it fired
    bool use_supersource = true;
    // ascending best-effort mode: grow the code within the time limit and
    // report bounds instead of descending from the cut bound
    bool lower_bound_only = false;
};

struct CapacityResult {
    enum class Status { Proven, Bounds };
    Status status = Status::Bounds;
    int max_code_size = 0;  // proven optimum, or best feasible size found
    double capacity = 0.0;  // log_q of max_code_size
    int lower = 0;
    int upper = 0;
    std::optional<Certificate> certificate;
    std::uint64_t nodes = 0;
    double wall_ms = 0.0;
    bool supersource_used = false;

    std::string to_json(const std::string& network_name, int q) const;
};

// Exact 1-shot capacity: max M with an unambiguous pair, searched over
// M in [1, q^mu] (cut bound). Descending with first-feasible-wins; on
// timeout, honest bounds are reported and never an unproven optimum.
CapacityResult max_code_size(const Network& n, const Alphabet& a,
                             const CapacityOptions& opts = {});

// Same with tables restricted to F_q-linear maps (outer code unrestricted).
// Requires a field alphabet.
CapacityResult linear_max_code_size(const Network& n, const Alphabet& a,
                                    const CapacityOptions& opts = {});

struct VerifyReport {
    bool ok = false;
    std::string detail;
};

// Independent semantic re-check of a certificate via direct simulation.
// Never trusts search internals.
VerifyReport verify_certificate(const Network& n, const Certificate& cert);

// Exhaustive enumeration of all network codes and all size-M outer codes,
// with is_unambiguous as the only predicate. Throws if the enumeration size
// exceeds max_checks.
SearchResult brute_force_oracle(const Network& n, const Alphabet& a, int M,
                                std::uint64_t max_checks = 100000000);

// Corollary transform: from a certificate on add_supersource(n) whose outer
// code is all of A^mu, derive the certificate for n (outer code = image of
// the old source's table).
Certificate strip_supersource(const Network& original, const Network& transformed,
                              const Certificate& cert);

}  // namespace netcap
