#include "rpkit/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "rpkit/errors.hpp"

namespace rpkit {

namespace {

std::string format_double(double x)
{
    if (std::isnan(x))
        return "null";
    if (std::isinf(x))
        return x > 0 ? "1e999" : "-1e999";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

void dump(const json& j, std::string& out)
{
    switch (j.type()) {
    case json::value_t::object: {
        out += '{';
        bool first = true;
        for (auto it = j.begin(); it != j.end(); ++it) { // std::map: sorted keys
            if (!first)
                out += ',';
            first = false;
            out += json(it.key()).dump();
            out += ':';
            dump(it.value(), out);
        }
        out += '}';
        break;
    }
    case json::value_t::array: {
        out += '[';
        for (std::size_t i = 0; i < j.size(); ++i) {
            if (i)
                out += ',';
            dump(j[i], out);
        }
        out += ']';
        break;
    }
    case json::value_t::number_float:
        out += format_double(j.get<double>());
        break;
    default:
        out += j.dump();
    }
}

std::vector<std::string> split_csv_line(const std::string& line)
{
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ss(line);
    while (std::getline(ss, cell, ','))
        cells.push_back(cell);
    if (!line.empty() && line.back() == ',')
        cells.emplace_back();
    return cells;
}

std::string trim(std::string s)
{
    const auto ws = " \t\r\n";
    s.erase(0, s.find_first_not_of(ws));
    s.erase(s.find_last_not_of(ws) + 1);
    return s;
}

bool parse_cell(const std::string& raw, double& value)
{
    const auto s = trim(raw);
    if (s.empty())
        return false;
    std::size_t pos = 0;
    try {
        value = std::stod(s, &pos);
    } catch (const std::exception&) {
        return false;
    }
    return pos == s.size();
}

double require_cell(const std::string& raw, std::size_t line)
{
    double v = 0.0;
    if (!parse_cell(raw, v))
        throw DomainError("CSV line " + std::to_string(line) + ": malformed number '" + trim(raw) + "'");
    return v;
}

} // namespace

std::string canonical_dump(const json& j)
{
    std::string out;
    dump(j, out);
    return out;
}

void to_json(json& j, const PsdVerdict& v)
{
    j = json{{"pass", v.pass},
             {"min_eigenvalue", v.min_eigenvalue},
             {"tolerance", v.tolerance},
             {"max_abs_eigenvalue", v.max_abs_eigenvalue}};
}

void to_json(json& j, const NdVerdict& v)
{
    j = json{{"pass", v.pass},
             {"max_projected_eigenvalue", v.max_projected_eigenvalue},
             {"tolerance", v.tolerance},
             {"degenerate", v.degenerate}};
}

void to_json(json& j, const OSQuotient& q)
{
    j = json{{"rank", q.rank},
             {"eigenvalues", q.eigenvalues},
             {"clipped_mass", q.clipped_mass},
             {"reconstruction_error", q.reconstruction_error}};
}

void to_json(json& j, const HatContraction& h)
{
    j = json{{"operator_norm", h.operator_norm},
             {"contraction", h.contraction},
             {"rank", h.rank},
             {"consistency_error", h.consistency_error}};
}

void to_json(json& j, const BernsteinReport& r)
{
    j = json{{"pass", r.pass},
             {"max_order_checked", r.max_order_checked},
             {"worst_violation", r.worst_violation},
             {"worst_order", r.worst_order},
             {"worst_point", r.worst_point},
             {"step", r.step}};
}

void to_json(json& j, const ReflectionNegativeVerdict& v)
{
    j = json{{"pass", v.pass},
             {"nd_on_line", v.nd_on_line},
             {"nd_on_semigroup", v.nd_on_semigroup},
             {"line", v.line},
             {"semigroup", v.semigroup}};
}

void to_json(json& j, const SchoenbergVerdict& v)
{
    j = json{{"lambda", v.lambda}, {"pass", v.pass}, {"line", v.line}, {"semigroup", v.semigroup}};
}

void to_json(json& j, const LKTriple& t)
{
    json atoms = json::array();
    for (const auto& a : t.atoms)
        atoms.push_back(json{{"lambda", a.lambda}, {"weight", a.weight}});
    j = json{{"a", t.a}, {"b", t.b}, {"atoms", atoms}};
}

void from_json(const json& j, LKTriple& t)
{
    t = LKTriple{};
    t.a = j.value("a", 0.0);
    t.b = j.value("b", 0.0);
    if (j.contains("atoms")) {
        for (const auto& a : j.at("atoms"))
            t.atoms.push_back({a.at("lambda").get<double>(), a.at("weight").get<double>()});
    }
    t.validate();
}

void to_json(json& j, const LKFit& f)
{
    j = json{{"triple", f.triple},
             {"residual", f.residual},
             {"condition_number", f.condition_number},
             {"ill_conditioned", f.ill_conditioned},
             {"converged", f.converged},
             {"lambda_grid", f.lambda_grid},
             {"grid_weights", f.grid_weights}};
}

void to_json(json& j, const StationarityVerdict& v)
{
    j = json{{"pass", v.pass},
             {"max_deviation", v.max_deviation},
             {"pairs_checked", v.pairs_checked},
             {"degenerate", v.degenerate}};
}

void to_json(json& j, const MCReport& r)
{
    j = json{{"estimate", json::array({r.estimate.real(), r.estimate.imag()})},
             {"target", r.target},
             {"abs_error", r.abs_error},
             {"n_samples", r.n_samples},
             {"half_width", r.half_width},
             {"pass", r.pass()}};
}

void to_json(json& j, const FockReport& r)
{
    j = json{{"kernel", r.kernel}, {"normalized", r.normalized}};
}

void to_json(json& j, const EmpiricalCovariance& c)
{
    json rows = json::array();
    for (Eigen::Index i = 0; i < c.matrix.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index k = 0; k < c.matrix.cols(); ++k)
            row.push_back(c.matrix(i, k));
        rows.push_back(row);
    }
    j = json{{"matrix", rows}, {"max_abs_deviation", c.max_abs_deviation}};
}

void to_json(json& j, const StepFunction& f)
{
    j = json{{"breakpoints", f.breakpoints()}, {"values", f.values()}};
}

void from_json(const json& j, StepFunction& f)
{
    f = StepFunction(j.at("breakpoints").get<std::vector<double>>(), j.at("values").get<std::vector<double>>());
}

void to_json(json& j, const CocycleVerdict& v) { j = json{{"pass", v.pass}, {"distance", v.distance}}; }

void to_json(json& j, const DualityVerdict& v)
{
    j = json{{"pass", v.pass}, {"covariance_error", v.covariance_error}, {"increment_error", v.increment_error}};
}

void to_json(json& j, const HatTrivialityVerdict& v)
{
    j = json{{"all_orthogonal", v.all_orthogonal}, {"max_abs_inner", v.max_abs_inner}, {"degenerate", v.degenerate}};
}

KernelSpec read_kernel_csv(std::istream& in)
{
    std::string line;
    std::vector<std::vector<std::string>> rows;
    while (std::getline(in, line)) {
        if (trim(line).empty())
            continue;
        rows.push_back(split_csv_line(line));
    }
    if (rows.size() < 2)
        throw DomainError("kernel CSV needs a header row and at least one data row");
    const std::size_t n = rows.size() - 1;
    if (rows[0].size() != n + 1)
        throw DomainError("kernel CSV header must list one grid point per data row");
    std::vector<double> header(n), column(n);
    for (std::size_t k = 0; k < n; ++k)
        header[k] = require_cell(rows[0][k + 1], 1);
    Eigen::MatrixXd m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) {
        const auto& row = rows[i + 1];
        if (row.size() != n + 1)
            throw DomainError("kernel CSV line " + std::to_string(i + 2) + " has the wrong number of cells");
        column[i] = require_cell(row[0], i + 2);
        for (std::size_t k = 0; k < n; ++k)
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = require_cell(row[k + 1], i + 2);
    }
    if (header != column)
        throw DomainError("kernel CSV first row and first column must carry the same grid points");
    return KernelSpec::tabulated(Grid(header), m);
}

KernelSpec read_kernel_csv_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw DomainError("cannot open kernel CSV '" + path + "'");
    return read_kernel_csv(in);
}

PsiSamples read_psi_csv(std::istream& in)
{
    PsiSamples out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty())
            continue;
        const auto cells = split_csv_line(line);
        if (cells.size() != 2)
            throw DomainError("psi CSV line " + std::to_string(lineno) + " must have two columns");
        double t = 0.0;
        if (out.t.empty() && lineno == 1 && !parse_cell(cells[0], t))
            continue; // header
        out.t.push_back(require_cell(cells[0], lineno));
        out.psi.push_back(require_cell(cells[1], lineno));
    }
    if (out.t.empty())
        throw DomainError("psi CSV has no samples");
    return out;
}

PsiSamples read_psi_csv_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw DomainError("cannot open psi CSV '" + path + "'");
    return read_psi_csv(in);
}

void write_paths_csv(const PathEnsemble& e, std::ostream& out)
{
    for (std::size_t k = 0; k < e.grid.size(); ++k)
        out << (k ? "," : "") << format_double(e.grid[k]);
    out << '\n';
    for (Eigen::Index r = 0; r < e.paths.rows(); ++r) {
        for (Eigen::Index k = 0; k < e.paths.cols(); ++k)
            out << (k ? "," : "") << format_double(e.paths(r, k));
        out << '\n';
    }
}

json ensemble_sidecar(const PathEnsemble& e)
{
    json params = json::object();
    for (const auto& [k, v] : e.target.params())
        params[k] = v;
    return json{{"seed", e.seed.value},
                {"process", e.target.name()},
                {"params", params},
                {"n_paths", e.paths.rows()},
                {"grid", std::vector<double>(e.grid.begin(), e.grid.end())},
                {"generator", e.generator},
                {"jitter", e.jitter}};
}

} // namespace rpkit
