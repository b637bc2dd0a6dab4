#include "util.hpp"

#include <cinttypes>
#include <cmath>
#include <cstring>
#include <ctime>
#include <filesystem>
#include <fstream>

namespace cli {

void check_status(int st, const std::string& what) {
    if (st == BS_OK) return;
    throw LibraryError(what + ": " + bs_error_name(st) + " (" + bs_last_error() + ")");
}

PotentialPtr make_potential(const IniConfig& cfg, const std::string& section,
                            long long seed_override) {
    if (!cfg.has_section(section))
        throw ConfigError("potential section [" + section + "] not found");
    const std::string family = cfg.get_string(section, "family");
    const int dim = cfg.get_int_or(section, "dim", 1);
    const double shift = cfg.get_double_or(section, "shift", 0.0);

    bs_potential* raw = nullptr;
    int st = BS_OK;
    if (family == "zero") {
        st = bs_potential_zero(dim, shift, &raw);
    } else if (family == "trig") {
        std::vector<double> amps = cfg.get_doubles(section, "amplitudes");
        st = bs_potential_trig(dim, amps.data(), static_cast<int>(amps.size()), shift,
                               &raw);
    } else if (family == "power_law") {
        st = bs_potential_power_law(dim, cfg.get_double(section, "amplitude"),
                                    cfg.get_double(section, "decay_exponent"),
                                    cfg.get_int(section, "cutoff"), shift, &raw);
    } else if (family == "gaussian") {
        st = bs_potential_gaussian(dim, cfg.get_double(section, "amplitude"),
                                   cfg.get_double(section, "width"),
                                   cfg.get_int(section, "cutoff"), shift, &raw);
    } else if (family == "truncated_delta") {
        st = bs_potential_truncated_delta(dim, cfg.get_double(section, "strength"),
                                          cfg.get_int(section, "cutoff"), shift, &raw);
    } else if (family == "random_smooth") {
        long long seed = seed_override >= 0
                             ? seed_override
                             : static_cast<long long>(cfg.get_int_or(section, "seed", 1));
        st = bs_potential_random_smooth(dim, cfg.get_double(section, "amplitude"),
                                        cfg.get_double(section, "width"),
                                        cfg.get_int(section, "cutoff"),
                                        static_cast<uint64_t>(seed), shift, &raw);
    } else {
        throw ConfigError("unknown potential family '" + family + "' in [" + section +
                          "]");
    }
    check_status(st, "building potential [" + section + "]");
    return PotentialPtr(raw);
}

BasisPtr make_basis(int dim, int m_cut, int size_limit) {
    bs_basis* raw = nullptr;
    check_status(bs_basis_create(dim, m_cut, size_limit, &raw), "creating basis");
    return BasisPtr(raw);
}

KGridPtr make_kgrid(int dim, int points, double offset) {
    bs_kgrid* raw = nullptr;
    check_status(bs_kgrid_create(dim, points, offset, &raw), "creating k-grid");
    return KGridPtr(raw);
}

SpectrumPtr solve_fiber(const bs_potential* v, const bs_basis* b, const double k[3],
                        int n_bands) {
    bs_spectrum* raw = nullptr;
    check_status(bs_solve_fiber(v, b, k, n_bands, &raw), "solving fiber");
    return SpectrumPtr(raw);
}

MomentumPtr make_momentum(const bs_spectrum* s, int alpha) {
    bs_momentum* raw = nullptr;
    check_status(bs_momentum_matrix(s, alpha, &raw), "building velocity matrix");
    return MomentumPtr(raw);
}

void read_kvec(const IniConfig& cfg, const std::string& section,
               const std::string& key, double k_out[3]) {
    k_out[0] = k_out[1] = k_out[2] = 0.0;
    if (!cfg.has_key(section, key)) return;
    std::vector<double> v = cfg.get_doubles(section, key);
    if (v.size() > 3)
        throw ConfigError("'" + key + "' in [" + section + "] has more than 3 entries");
    for (size_t i = 0; i < v.size(); ++i) k_out[i] = v[i];
}

std::string fmt17(double x) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

CsvWriter::CsvWriter(const std::string& path, const std::vector<std::string>& columns)
    : m_columns(columns.size()), m_path(path) {
    m_file = std::fopen(path.c_str(), "wb");
    if (!m_file) throw ConfigError("cannot open output file: " + path);
    for (size_t i = 0; i < columns.size(); ++i)
        std::fprintf(m_file, "%s%s", columns[i].c_str(),
                     i + 1 == columns.size() ? "\n" : ",");
}

CsvWriter::~CsvWriter() {
    if (m_file) std::fclose(m_file);
}

void CsvWriter::row(const std::vector<std::string>& cells) {
    if (cells.size() != m_columns)
        throw std::logic_error("CSV row width mismatch in " + m_path);
    for (size_t i = 0; i < cells.size(); ++i)
        std::fprintf(m_file, "%s%s", cells[i].c_str(),
                     i + 1 == cells.size() ? "\n" : ",");
}

void CheckLedger::bound(const std::string& name, double value, double tolerance,
                        const std::string& detail) {
    bool ok = std::abs(value) <= tolerance;
    json c;
    c["name"] = name;
    c["passed"] = ok;
    c["value"] = value;
    c["tolerance"] = tolerance;
    if (!detail.empty()) c["detail"] = detail;
    m_checks.push_back(std::move(c));
    m_all = m_all && ok;
}

void CheckLedger::require(const std::string& name, bool ok,
                          const std::string& detail) {
    json c;
    c["name"] = name;
    c["passed"] = ok;
    if (!detail.empty()) c["detail"] = detail;
    m_checks.push_back(std::move(c));
    m_all = m_all && ok;
}

namespace {

std::string utc_timestamp() {
    std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

}  // namespace

int write_report(const std::string& out_dir, const std::string& experiment,
                 const IniConfig& cfg, const json& results, const CheckLedger& checks) {
    json report;
    report["experiment"] = experiment;
    report["timestamp"] = utc_timestamp();
    report["config"] = cfg.flattened();
    report["results"] = results;
    report["checks"] = checks.to_json();
    report["pass"] = checks.all_passed();

    const std::string path = out_dir + "/report.json";
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot open output file: " + path);
    out << report.dump(2) << "\n";
    if (!out) throw ConfigError("failed writing: " + path);

    if (!checks.all_passed()) {
        for (const auto& c : checks.to_json())
            if (!c["passed"].get<bool>())
                std::fprintf(stderr, "check failed: %s%s\n",
                             c["name"].get<std::string>().c_str(),
                             c.contains("detail")
                                 ? (" (" + c["detail"].get<std::string>() + ")").c_str()
                                 : "");
        return 1;
    }
    return 0;
}

void ensure_directory(const std::string& path) {
    std::error_code ec;
    std::filesystem::create_directories(path, ec);
    if (ec) throw ConfigError("cannot create output directory '" + path +
                              "': " + ec.message());
}

}  // namespace cli
