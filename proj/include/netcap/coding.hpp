#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "netcap/alphabet.hpp"
#include "netcap/network.hpp"

namespace netcap {

// Function tables of a network code. For vertex V with d incoming and r
// outgoing edges, table[V] is a flat list of length q^d * r: row i lists the
// r outgoing symbols (in edge order) produced by the input tuple whose
// big-endian base-q encoding (digits in edge order of in(V)) is i.
struct NetworkCode {
    std::map<VertexId, std::vector<Symbol>> tables;
};

struct OuterCode {
    std::vector<std::vector<Symbol>> codewords;
};

// Symbols carried by every edge for one transmitted codeword, indexed by the
// network's canonical edge indices.
struct Transcript {
    std::vector<Symbol> by_edge;

    std::vector<Symbol> restrict_to(const Network& n, const std::vector<int>& edges) const;
};

struct Certificate {
    int q = 0;
    bool field = false;
    OuterCode outer_code;
    NetworkCode network_code;
};

// Witness of an unambiguity failure: terminal plus two codeword indices whose
// received tuples coincide there.
struct AmbiguityWitness {
    VertexId terminal;
    int codeword_a;
    int codeword_b;
    std::vector<Symbol> received;
};

void check_code_arities(const Network& n, int q, const NetworkCode& f);

// Deterministic propagation of one codeword through the network. The
// restriction of the transcript to in(T) is the channel output at T.
Transcript transmit(const Network& n, const Alphabet& a, const NetworkCode& f,
                    const std::vector<Symbol>& codeword);

// Propagation under an arbitrary legal edge-order extension; f's tables are
// interpreted with tuple positions sorted by `order`. The returned transcript
// is still indexed by canonical edge indices.
Transcript transmit_with_order(const Network& n, const Alphabet& a, const EdgeOrder& order,
                               const NetworkCode& f, const std::vector<Symbol>& codeword);

// True iff every terminal's channel map is injective on the outer code.
// On failure the witness is filled in.
bool is_unambiguous(const Network& n, const Alphabet& a, const OuterCode& code,
                    const NetworkCode& f, AmbiguityWitness* witness = nullptr);

// True iff every table is a matrix-induced linear map over the field.
// Throws if the alphabet has no field structure.
bool is_linear(const Network& n, const Alphabet& a, const NetworkCode& f);

// log_q(code_size), the capacity value attached to an exact code size.
double capacity_value(long code_size, int q);

// Replication table for a single-input vertex (or replication-of-first for
// the general case), used to complete partially specified codes.
std::vector<Symbol> replication_table(const Network& n, int q, int vertex);

}  // namespace netcap
