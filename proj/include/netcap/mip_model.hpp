#pragma once

#include <map>
#include <string>
#include <vector>

#include "netcap/alphabet.hpp"
#include "netcap/network.hpp"

namespace netcap {

enum class VarKind { X, Y, Z, W };

enum class ConstraintTag { C1, C2, C3, C4, C5, C6, C7, MC, SYM, FIX };

const char* to_string(VarKind k);
const char* to_string(ConstraintTag t);

// A binary decision variable. Meaning by kind:
//   x[c,V,m'] : vertex V emits tuple m' when codeword c is sent
//   y[c,V,m]  : vertex V receives tuple m when codeword c is sent
//   z[V,m,m'] : the function at V maps m to m'
//   w[c,V,m,m'] : McCormick product y[c,V,m] * z[V,m,m']
// Tuples are stored as their big-endian base-q indices; -1 marks an unused
// slot (e.g. codeword for z).
struct ModelVariable {
    VarKind kind;
    int codeword;   // 1-based, -1 for z
    int vertex;     // network vertex index
    long in_tuple;  // -1 when absent (x)
    long out_tuple; // -1 when absent (y)
    std::string name;
};

enum class Sense { LE, EQ, GE };

struct ModelConstraint {
    std::string name;
    ConstraintTag tag;
    std::vector<std::pair<double, int>> terms;  // (coefficient, variable index)
    Sense sense;
    double rhs;
};

struct ModelOptions {
    bool routing_fix = false;
    bool symmetry_break = false;
    // refuse to build per-vertex z blocks larger than this many variables
    long max_z_per_vertex = 1000000;
};

struct ModelStats {
    std::map<std::string, long> variables_by_kind;
    std::map<std::string, long> constraints_by_tag;
};

// The binary feasibility model: does an unambiguous (outer code of size M,
// network code) pair exist? Objective is constantly zero.
class FeasibilityModel {
public:
    std::string network_name;
    int q = 0;
    int code_size = 0;
    ModelOptions options;

    std::vector<ModelVariable> variables;
    std::vector<ModelConstraint> constraints;

    // vertex id -> sanitized token used in variable/constraint names
    std::map<std::string, std::string> vertex_name_map;

    int find_variable(VarKind kind, int codeword, int vertex, long in_tuple,
                      long out_tuple) const;
    ModelStats stats() const;

    // Deterministic text export. Sanitized names; the original-name mapping
    // is appended as comments when sanitization changed anything.
    std::string export_lp() const;
    std::string export_mps() const;

    // File name following <network>_q<q>_M<M>[_rf][_sym].<ext>
    std::string canonical_file_name(const std::string& extension) const;

    // Sidecar metadata (options used, name mapping) as JSON text.
    std::string metadata_json() const;
};

FeasibilityModel build_model(const Network& n, const Alphabet& a, int code_size,
                             const ModelOptions& opts = {});

}  // namespace netcap
