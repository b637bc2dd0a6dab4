// Shared plumbing for the experiment runner: RAII wrappers over the C
// handles, status checking, CSV/JSON emission, and the pass/fail ledger.
#pragma once

#include <blochsum.h>

#include <json.hpp>

#include <cstdio>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "ini.hpp"

namespace cli {

using json = nlohmann::ordered_json;

// Thrown when the library rejects a request; maps to exit code 2 because it
// always traces back to the configuration.
class LibraryError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Throws LibraryError unless st == BS_OK (expected statuses filtered by the
// caller beforehand).
void check_status(int st, const std::string& what);

struct PotentialDeleter {
    void operator()(bs_potential* p) const { bs_potential_free(p); }
};
struct BasisDeleter {
    void operator()(bs_basis* b) const { bs_basis_free(b); }
};
struct KGridDeleter {
    void operator()(bs_kgrid* g) const { bs_kgrid_free(g); }
};
struct SpectrumDeleter {
    void operator()(bs_spectrum* s) const { bs_spectrum_free(s); }
};
struct MomentumDeleter {
    void operator()(bs_momentum* m) const { bs_momentum_free(m); }
};
struct DeltaDeleter {
    void operator()(bs_delta* d) const { bs_delta_free(d); }
};

using PotentialPtr = std::unique_ptr<bs_potential, PotentialDeleter>;
using BasisPtr = std::unique_ptr<bs_basis, BasisDeleter>;
using KGridPtr = std::unique_ptr<bs_kgrid, KGridDeleter>;
using SpectrumPtr = std::unique_ptr<bs_spectrum, SpectrumDeleter>;
using MomentumPtr = std::unique_ptr<bs_momentum, MomentumDeleter>;
using DeltaPtr = std::unique_ptr<bs_delta, DeltaDeleter>;

// Builds the potential named by `section` ("family = ..." selects the
// constructor).  A non-negative seed_override replaces the configured seed of
// the random-smooth family.
PotentialPtr make_potential(const IniConfig& cfg, const std::string& section,
                            long long seed_override);

BasisPtr make_basis(int dim, int m_cut, int size_limit);
KGridPtr make_kgrid(int dim, int points, double offset);
SpectrumPtr solve_fiber(const bs_potential* v, const bs_basis* b, const double k[3],
                        int n_bands);
MomentumPtr make_momentum(const bs_spectrum* s, int alpha);

// Reads "k = x [y z]" style vectors; missing components are zero.
void read_kvec(const IniConfig& cfg, const std::string& section,
               const std::string& key, double k_out[3]);

// 17-significant-digit decimal rendering, the CSV number format.
std::string fmt17(double x);

// Column-oriented CSV writer: header first, then one row per call.
class CsvWriter {
public:
    CsvWriter(const std::string& path, const std::vector<std::string>& columns);
    ~CsvWriter();
    CsvWriter(const CsvWriter&) = delete;
    CsvWriter& operator=(const CsvWriter&) = delete;

    void row(const std::vector<std::string>& cells);

private:
    std::FILE* m_file = nullptr;
    size_t m_columns = 0;
    std::string m_path;
};

// Accumulates named tolerance checks and renders them into the report.
class CheckLedger {
public:
    // |value| <= bound
    void bound(const std::string& name, double value, double tolerance,
               const std::string& detail = "");
    // plain predicate
    void require(const std::string& name, bool ok, const std::string& detail = "");

    bool all_passed() const { return m_all; }
    json to_json() const { return m_checks; }

private:
    json m_checks = json::array();
    bool m_all = true;
};

// Assembles and writes the JSON report; returns the process exit code
// (0 when every check passed, 1 otherwise).
int write_report(const std::string& out_dir, const std::string& experiment,
                 const IniConfig& cfg, const json& results, const CheckLedger& checks);

// Creates the directory (and parents) if needed; throws ConfigError on failure.
void ensure_directory(const std::string& path);

}  // namespace cli
