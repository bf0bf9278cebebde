#pragma once

#include <string>

#include "oscitrace/potential.hpp"
#include "oscitrace/spectra.hpp"

namespace oscitrace {

struct Tolerances {
    double quadrature = 1e-10;
    double eigen = 1e-8;
    double trace = 1e-3;
};

struct RunConfig {
    Potential potential;
    int basis_size = 1200;
    int eigen_count = 400;
    int max_j = 6;
    Tolerances tolerances;
    std::string output_dir = ".";
    std::string cache_dir = ".oscitrace-cache";
};

// canonical JSON form; parse(dump(x)) round-trips bit-identically
std::string config_to_json(const RunConfig& cfg);
RunConfig config_from_json(const std::string& text);
RunConfig load_config(const std::string& path);

// FNV-1a 64 content hashes (hex strings)
std::string potential_id(const Potential& q);
std::string spectrum_cache_key(const RunConfig& cfg);

// {"potential_id":..., "N":..., "eigenvalues":[...], "reliable_count":...}
std::string spectrum_to_json(const Spectrum& spec);
Spectrum spectrum_from_json(const std::string& text);

// write-to-temp then rename; no partial files on error
void atomic_write(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);

} // namespace oscitrace
