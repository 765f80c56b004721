#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "rpkit/cocycle.hpp"
#include "rpkit/definiteness.hpp"
#include "rpkit/kernel.hpp"
#include "rpkit/monte_carlo.hpp"
#include "rpkit/negdef.hpp"
#include "rpkit/process.hpp"
#include "rpkit/quotient.hpp"
#include "rpkit/sampling.hpp"
#include "rpkit/step_function.hpp"

namespace rpkit {

using json = nlohmann::json;

/// Sorted keys, numbers printed with %.17g (integers as integers), no whitespace.
std::string canonical_dump(const json& j);

// Verdict schema shared across modules: {"pass", "min_eigenvalue", "tolerance"} for PSD checks.
void to_json(json& j, const PsdVerdict& v);
void to_json(json& j, const NdVerdict& v);
void to_json(json& j, const OSQuotient& q);
void to_json(json& j, const HatContraction& h);
void to_json(json& j, const BernsteinReport& r);
void to_json(json& j, const ReflectionNegativeVerdict& v);
void to_json(json& j, const SchoenbergVerdict& v);
void to_json(json& j, const LKTriple& t);
void from_json(const json& j, LKTriple& t);
void to_json(json& j, const LKFit& f);
void to_json(json& j, const StationarityVerdict& v);
void to_json(json& j, const MCReport& r);
void to_json(json& j, const FockReport& r);
void to_json(json& j, const EmpiricalCovariance& c);
void to_json(json& j, const StepFunction& f);
void from_json(const json& j, StepFunction& f);
void to_json(json& j, const CocycleVerdict& v);
void to_json(json& j, const DualityVerdict& v);
void to_json(json& j, const HatTrivialityVerdict& v);

/// Kernel table CSV: first row and first column hold the grid points, cell (i, j) the value.
KernelSpec read_kernel_csv(std::istream& in);
KernelSpec read_kernel_csv_file(const std::string& path);

struct PsiSamples {
    std::vector<double> t;
    std::vector<double> psi;
};

/// Two-column CSV (t, psi); a non-numeric first line is treated as a header.
PsiSamples read_psi_csv(std::istream& in);
PsiSamples read_psi_csv_file(const std::string& path);

/// Header row of grid points, one path per row, %.17g.
void write_paths_csv(const PathEnsemble& e, std::ostream& out);

/// {"seed", "process", "params", "n_paths", "grid", "generator", "jitter"}
json ensemble_sidecar(const PathEnsemble& e);

} // namespace rpkit
