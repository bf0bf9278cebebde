#include "oscitrace/config.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace oscitrace {

namespace {

using ordered_json = nlohmann::ordered_json;

ordered_json potential_json(const Potential& q) {
    ordered_json terms = ordered_json::array();
    for (const auto& t : q.terms())
        terms.push_back({{"poly", t.poly}, {"center", t.center}, {"radius", t.radius}});
    return ordered_json{{"terms", terms}};
}

uint64_t fnv1a(const std::string& data) {
    uint64_t h = 14695981039346656037ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::string hex64(uint64_t h) {
    static const char* digits = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[static_cast<size_t>(i)] = digits[h & 0xf];
        h >>= 4;
    }
    return out;
}

} // namespace

std::string config_to_json(const RunConfig& cfg) {
    ordered_json j;
    j["potential"] = potential_json(cfg.potential);
    j["basis_size"] = cfg.basis_size;
    j["eigen_count"] = cfg.eigen_count;
    j["max_j"] = cfg.max_j;
    j["tolerances"] = {{"quadrature", cfg.tolerances.quadrature},
                       {"eigen", cfg.tolerances.eigen},
                       {"trace", cfg.tolerances.trace}};
    j["output_dir"] = cfg.output_dir;
    j["cache_dir"] = cfg.cache_dir;
    return j.dump(2) + "\n";
}

RunConfig config_from_json(const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    RunConfig cfg;
    cfg.potential = potential_from_json(j.at("potential").dump());
    cfg.basis_size = j.at("basis_size").get<int>();
    cfg.eigen_count = j.at("eigen_count").get<int>();
    cfg.max_j = j.at("max_j").get<int>();
    const auto& tol = j.at("tolerances");
    cfg.tolerances.quadrature = tol.at("quadrature").get<double>();
    cfg.tolerances.eigen = tol.at("eigen").get<double>();
    cfg.tolerances.trace = tol.at("trace").get<double>();
    cfg.output_dir = j.at("output_dir").get<std::string>();
    cfg.cache_dir = j.at("cache_dir").get<std::string>();
    return cfg;
}

RunConfig load_config(const std::string& path) { return config_from_json(read_file(path)); }

std::string potential_id(const Potential& q) {
    return hex64(fnv1a(potential_json(q).dump()));
}

std::string spectrum_cache_key(const RunConfig& cfg) {
    ordered_json j;
    j["potential"] = potential_json(cfg.potential);
    j["N"] = cfg.basis_size;
    j["count"] = cfg.eigen_count;
    j["eigen_tol"] = cfg.tolerances.eigen;
    j["quadrature"] = {{"rule_order", 20}, {"nodes_per_wavelength", 8}};
    return hex64(fnv1a(j.dump()));
}

std::string spectrum_to_json(const Spectrum& spec) {
    ordered_json j;
    j["potential_id"] = spec.potential_id;
    j["N"] = spec.basis_size;
    j["eigenvalues"] = spec.eigenvalues;
    j["reliable_count"] = spec.reliable_count;
    j["method"] = spec.method == SpectrumMethod::galerkin ? "galerkin" : "shooting";
    j["gaps"] = spec.gaps;
    return j.dump(2) + "\n";
}

Spectrum spectrum_from_json(const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    Spectrum spec;
    spec.potential_id = j.at("potential_id").get<std::string>();
    spec.basis_size = j.at("N").get<int>();
    spec.eigenvalues = j.at("eigenvalues").get<std::vector<double>>();
    spec.reliable_count = j.at("reliable_count").get<int>();
    spec.method = j.value("method", "galerkin") == std::string("shooting")
                      ? SpectrumMethod::shooting
                      : SpectrumMethod::galerkin;
    spec.gaps = j.value("gaps", std::vector<double>{});
    return spec;
}

void atomic_write(const std::string& path, const std::string& content) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    if (target.has_parent_path()) fs::create_directories(target.parent_path());
    const fs::path tmp = target.string() + ".tmp";
    {
        std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
        if (!os) throw std::runtime_error("atomic_write: cannot open " + tmp.string());
        os << content;
        if (!os.good()) throw std::runtime_error("atomic_write: write failed for " + tmp.string());
    }
    fs::rename(tmp, target);
}

std::string read_file(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

} // namespace oscitrace
