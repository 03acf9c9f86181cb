#include "netcap/json_io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace netcap {

using nlohmann::json;

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out << text;
}

json parse_or_throw(const std::string& text, const std::string& what) {
    if (text.find_first_not_of(" \t\r\n") == std::string::npos)
        throw std::runtime_error(what + ": file is empty");
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw std::runtime_error(what + ": " + e.what());
    }
}

const char* kTableConvention =
    "table[V] is flat: row i lists out-symbols of V in edge order; "
    "i is the big-endian base-q encoding of the in-symbols of V in edge order";

}  // namespace

RawNetwork parse_raw_network(const std::string& json_text, const std::string& name_hint) {
    json j = parse_or_throw(json_text, "network file");
    RawNetwork raw;
    raw.name = j.value("name", name_hint);
    if (!j.contains("vertices") || !j.contains("edges") || !j.contains("source") ||
        !j.contains("terminals"))
        throw std::runtime_error(
            "network file: expected fields vertices, edges, source, terminals");
    for (const auto& v : j.at("vertices")) raw.vertices.push_back(v.get<std::string>());
    for (const auto& e : j.at("edges")) {
        if (!e.is_array() || e.size() != 3)
            throw std::runtime_error("network file: each edge must be [id, tail, head]");
        raw.edges.push_back({e[0].get<std::string>(), e[1].get<std::string>(),
                             e[2].get<std::string>()});
    }
    raw.source = j.at("source").get<std::string>();
    for (const auto& t : j.at("terminals")) raw.terminals.push_back(t.get<std::string>());
    return raw;
}

RawNetwork load_raw_network_file(const std::string& path) {
    auto slash = path.find_last_of('/');
    std::string base = slash == std::string::npos ? path : path.substr(slash + 1);
    auto dot = base.find_last_of('.');
    if (dot != std::string::npos) base = base.substr(0, dot);
    return parse_raw_network(read_file(path), base);
}

Network load_network_file(const std::string& path) {
    return Network::validate_or_throw(load_raw_network_file(path));
}

std::string network_to_json(const RawNetwork& raw) {
    json j;
    if (!raw.name.empty()) j["name"] = raw.name;
    j["vertices"] = raw.vertices;
    j["edges"] = json::array();
    for (const auto& e : raw.edges) j["edges"].push_back({e.id, e.tail, e.head});
    j["source"] = raw.source;
    j["terminals"] = raw.terminals;
    return j.dump(2) + "\n";
}

void save_network_file(const RawNetwork& raw, const std::string& path) {
    write_file(path, network_to_json(raw));
}

Certificate parse_certificate(const std::string& json_text) {
    json j = parse_or_throw(json_text, "certificate file");
    Certificate cert;
    if (!j.contains("alphabet") || !j.contains("outer_code") || !j.contains("network_code"))
        throw std::runtime_error(
            "certificate file: expected fields alphabet, outer_code, network_code");
    cert.q = j.at("alphabet").at("q").get<int>();
    cert.field = j.at("alphabet").value("field", false);
    if (cert.q < 2) throw std::runtime_error("certificate file: alphabet size must be >= 2");
    for (const auto& cw : j.at("outer_code")) {
        std::vector<Symbol> word;
        for (const auto& s : cw) {
            int v = s.get<int>();
            if (v < 0 || v >= cert.q)
                throw std::runtime_error("certificate file: codeword symbol out of range");
            word.push_back(static_cast<Symbol>(v));
        }
        cert.outer_code.codewords.push_back(std::move(word));
    }
    for (const auto& [vertex, table] : j.at("network_code").items()) {
        std::vector<Symbol> tab;
        for (const auto& s : table) {
            int v = s.get<int>();
            if (v < 0 || v >= cert.q)
                throw std::runtime_error("certificate file: table symbol out of range for '" +
                                         vertex + "'");
            tab.push_back(static_cast<Symbol>(v));
        }
        cert.network_code.tables[vertex] = std::move(tab);
    }
    return cert;
}

Certificate load_certificate_file(const std::string& path) {
    return parse_certificate(read_file(path));
}

std::string certificate_to_json(const Certificate& cert) {
    json j;
    j["convention"] = kTableConvention;
    j["alphabet"] = {{"q", cert.q}, {"field", cert.field}};
    j["outer_code"] = json::array();
    for (const auto& cw : cert.outer_code.codewords) {
        json w = json::array();
        for (Symbol s : cw) w.push_back(static_cast<int>(s));
        j["outer_code"].push_back(w);
    }
    j["network_code"] = json::object();
    for (const auto& [vertex, table] : cert.network_code.tables) {
        json t = json::array();
        for (Symbol s : table) t.push_back(static_cast<int>(s));
        j["network_code"][vertex] = t;
    }
    return j.dump(2) + "\n";
}

void save_certificate_file(const Certificate& cert, const std::string& path) {
    write_file(path, certificate_to_json(cert));
}

}  // namespace netcap
