#include "ornlab/io.hpp"

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>

namespace ornlab::io {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("read_file: cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("write_file: cannot open " + path);
    out << content;
}

std::string fnv1a_hex(const std::string& text) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string loadmap_to_csv(const LoadMap& load, const Schedule& s, const std::string& meta) {
    std::ostringstream out;
    out << "# " << meta << "\n";
    out << "tail_index,timestep_k,head_index,load_num,load_den\n";
    for (std::uint64_t tail = 0; tail < load.N; ++tail) {
        for (long k = 0; k < load.T; ++k) {
            const Rat& r = load.at(tail, k);
            if (r == 0) continue;
            out << tail << "," << k << "," << sched_perm(s, k, tail) << "," << numerator(r).str()
                << "," << denominator(r).str() << "\n";
        }
    }
    return out.str();
}

std::string loadmap_to_json(const LoadMap& load, const Schedule& s, const std::string& meta) {
    nlohmann::json j;
    j["meta"] = meta;
    j["N"] = load.N;
    j["T"] = load.T;
    nlohmann::json edges = nlohmann::json::array();
    for (std::uint64_t tail = 0; tail < load.N; ++tail) {
        for (long k = 0; k < load.T; ++k) {
            const Rat& r = load.at(tail, k);
            if (r == 0) continue;
            edges.push_back({{"tail", tail},
                             {"k", k},
                             {"head", sched_perm(s, k, tail)},
                             {"num", numerator(r).str()},
                             {"den", denominator(r).str()}});
        }
    }
    j["edges"] = edges;
    return j.dump(2) + "\n";
}

std::string curves_to_csv(const std::vector<CurvePoint>& points, const std::string& meta) {
    std::ostringstream out;
    out << "# " << meta << "\n";
    out << "r,g,eps,L_upp,L_low,L_obl,L_sem,vlb_line\n";
    out.precision(17);
    for (const auto& p : points) {
        out << p.r << "," << p.g << "," << p.eps << "," << p.l_upp << "," << p.l_low << ","
            << p.l_obl << "," << p.l_sem << "," << p.vlb << "\n";
    }
    return out.str();
}

Permutation demand_from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    if (!j.is_array()) throw Error("demand_from_json: expected a JSON array");
    return j.get<Permutation>();
}

}  // namespace ornlab::io
