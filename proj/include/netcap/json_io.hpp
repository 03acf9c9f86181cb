#pragma once

#include <string>

#include "netcap/coding.hpp"
#include "netcap/network.hpp"

namespace netcap {

// Network file format:
//   {"vertices": [...], "edges": [[id, tail, head], ...],
//    "source": ..., "terminals": [...]}
// Edge list order is irrelevant; the canonical edge order is recomputed.
RawNetwork parse_raw_network(const std::string& json_text, const std::string& name_hint = "");
RawNetwork load_raw_network_file(const std::string& path);
Network load_network_file(const std::string& path);
std::string network_to_json(const RawNetwork& raw);
void save_network_file(const RawNetwork& raw, const std::string& path);

// Certificate interchange format:
//   {"alphabet": {"q": ..., "field": ...},
//    "outer_code": [[...], ...],
//    "network_code": {vertex: [flat table], ...},
//    "convention": <table indexing documentation>}
Certificate parse_certificate(const std::string& json_text);
Certificate load_certificate_file(const std::string& path);
std::string certificate_to_json(const Certificate& cert);
void save_certificate_file(const Certificate& cert, const std::string& path);

}  // namespace netcap
