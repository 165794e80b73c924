#include "tmd/io.hpp"

#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "tmd/errors.hpp"

namespace tmd {

namespace pt = boost::property_tree;

namespace {

double to_double(const std::string& key, const std::string& s) {
    try {
        std::size_t used = 0;
        double v = std::stod(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ParseError("key '" + key + "': not a number: '" + s + "'");
    }
}

int to_int(const std::string& key, const std::string& s) {
    double v = to_double(key, s);
    if (v != std::floor(v)) throw ParseError("key '" + key + "': expected an integer");
    return static_cast<int>(v);
}

// Reads a section, rejecting keys outside `allowed`.
class Section {
public:
    Section(const pt::ptree* tree, std::string name, std::set<std::string> allowed)
        : tree_(tree), name_(std::move(name)) {
        if (!tree_) return;
        for (const auto& [k, v] : *tree_)
            if (!allowed.count(k)) throw ParseError("[" + name_ + "] unknown key '" + k + "'");
    }
    std::optional<std::string> raw(const std::string& k) const {
        if (!tree_) return {};
        auto v = tree_->get_optional<std::string>(k);
        if (!v) return {};
        return *v;
    }
    double num(const std::string& k, double fallback) const {
        auto v = raw(k);
        return v ? to_double(k, *v) : fallback;
    }
    double required(const std::string& k) const {
        auto v = raw(k);
        if (!v) throw ParseError("[" + name_ + "] missing key '" + k + "'");
        return to_double(k, *v);
    }

private:
    const pt::ptree* tree_;
    std::string name_;
};

Drive parse_drive(const Section& s, const std::string& name) {
    auto kind = s.raw(name);
    if (!kind || *kind == "zero") return {};
    if (*kind == "constant")
        return Drive::constant({s.num(name + "_re", 0.0), s.num(name + "_im", 0.0)});
    if (*kind == "sinusoid")
        return Drive::sinusoid(s.required(name + "_amp"), s.num(name + "_omega", 0.0),
                               s.num(name + "_phase", 0.0));
    throw ParseError("drive '" + name + "' must be zero, constant or sinusoid");
}

const std::set<std::string>& case_keys(CaseKind k) {
    static const std::map<CaseKind, std::set<std::string>> keys = {
        {CaseKind::ConstantPhase, {"eta0", "phi0", "w11", "w22"}},
        {CaseKind::LinearPhase, {"eta0", "w0", "phi0", "w11", "w22"}},
        {CaseKind::GeneralPhase, {"eta0", "w0", "phi0", "phi1", "phi2", "w11", "w22"}},
        {CaseKind::AllConstant, {"w11", "w22", "w12_re", "w12_im"}},
        {CaseKind::IsotropicConstant, {"rho0", "theta_alpha0", "theta_beta0"}},
        {CaseKind::RhoConstant, {"rho0", "eta0", "w0", "theta_alpha0", "theta_beta0"}},
        {CaseKind::LogRho, {"t0", "eta0", "w0", "theta_alpha0", "theta_beta0"}},
        {CaseKind::QuadraticPhase, {"eta0", "theta0", "w11", "w22"}},
        {CaseKind::FresnelNorm, {"w12_0", "nu", "theta_v0", "theta_u0", "w11", "w22"}},
        {CaseKind::Tabulated, {"table"}},
    };
    return keys.at(k);
}

CaseParams parse_params(CaseKind kind, const Section& s, const std::filesystem::path& base) {
    switch (kind) {
        case CaseKind::ConstantPhase:
            return ConstantPhaseParams{s.required("eta0"), s.num("phi0", 0), s.num("w11", 0),
                                       s.num("w22", 0)};
        case CaseKind::LinearPhase:
            return LinearPhaseParams{s.required("eta0"), s.required("w0"), s.num("phi0", 0),
                                     s.num("w11", 0), s.num("w22", 0)};
        case CaseKind::GeneralPhase:
            return GeneralPhaseParams{s.required("eta0"), s.required("w0"), s.num("phi0", 0),
                                      s.required("phi1"), s.num("phi2", 0), s.num("w11", 0),
                                      s.num("w22", 0)};
        case CaseKind::AllConstant:
            return AllConstantParams{s.required("w11"), s.required("w22"),
                                     {s.num("w12_re", 0), s.num("w12_im", 0)}};
        case CaseKind::IsotropicConstant:
            return IsotropicParams{s.required("rho0"), s.num("theta_alpha0", 0),
                                   s.num("theta_beta0", 0)};
        case CaseKind::RhoConstant:
            return RhoConstantParams{s.required("rho0"), s.required("eta0"), s.required("w0"),
                                     s.num("theta_alpha0", 0), s.num("theta_beta0", 0)};
        case CaseKind::LogRho:
            return LogRhoParams{s.required("t0"), s.required("eta0"), s.required("w0"),
                                s.num("theta_alpha0", 0), s.num("theta_beta0", 0)};
        case CaseKind::QuadraticPhase:
            return QuadraticPhaseParams{s.required("eta0"), s.required("theta0"),
                                        s.num("w11", 0), s.num("w22", 0)};
        case CaseKind::FresnelNorm:
            return FresnelNormParams{s.required("w12_0"), s.required("nu"),
                                     s.num("theta_v0", 0), s.num("theta_u0", 0),
                                     s.num("w11", 0), s.num("w22", 0)};
        case CaseKind::Tabulated: {
            auto file = s.raw("table");
            if (!file) throw ParseError("[scenario] Tabulated needs 'table'");
            std::filesystem::path p(*file);
            if (p.is_relative()) p = base / p;
            return make_tabulated(read_table_csv(p));
        }
    }
    throw ParseError("unhandled case");
}

}  // namespace

ScenarioFile parse_scenario(const std::string& text, const std::filesystem::path& base_dir) {
    pt::ptree tree;
    try {
        std::istringstream in(text);
        pt::read_ini(in, tree);
    } catch (const pt::ini_parser_error& e) {
        throw ParseError(std::string("scenario file: ") + e.what());
    }
    for (const auto& [name, sec] : tree)
        if (name != "scenario" && name != "drive" && name != "run")
            throw ParseError("unknown section [" + name + "]");
    auto sc_tree = tree.get_child_optional("scenario");
    if (!sc_tree) throw ParseError("missing [scenario] section");
    auto case_str = sc_tree->get_optional<std::string>("case");
    if (!case_str) throw ParseError("[scenario] missing key 'case'");
    CaseKind kind;
    try {
        kind = parse_case_name(*case_str);
    } catch (const Error& e) {
        throw ParseError(e.what());
    }
    std::set<std::string> allowed = case_keys(kind);
    allowed.insert({"case", "Z0_re", "Z0_im"});
    Section scen(&*sc_tree, "scenario", allowed);

    std::optional<cplx> z0;
    if (scen.raw("Z0_re") || scen.raw("Z0_im")) z0 = cplx(scen.num("Z0_re", 0), scen.num("Z0_im", 0));

    Drives drives;
    if (auto d = tree.get_child_optional("drive")) {
        std::set<std::string> keys;
        for (std::string n : {"F1", "F2", "B"})
            for (std::string suf : {"", "_re", "_im", "_amp", "_omega", "_phase"})
                keys.insert(n + suf);
        Section ds(&*d, "drive", keys);
        drives.F1 = parse_drive(ds, "F1");
        drives.F2 = parse_drive(ds, "F2");
        drives.B = parse_drive(ds, "B");
    }

    RunHints hints;
    if (auto r = tree.get_child_optional("run")) {
        Section rs(&*r, "run", {"t_end", "grid", "tol", "nmax", "steps"});
        if (auto v = rs.raw("t_end")) hints.t_end = to_double("t_end", *v);
        if (auto v = rs.raw("grid")) hints.grid = to_int("grid", *v);
        if (auto v = rs.raw("tol")) hints.tol = to_double("tol", *v);
        if (auto v = rs.raw("nmax")) hints.n_max = to_int("nmax", *v);
        if (auto v = rs.raw("steps")) hints.steps = to_int("steps", *v);
    }

    try {
        return {Scenario(parse_params(kind, scen, base_dir), drives, z0), hints};
    } catch (const ParseError&) {
        throw;
    } catch (const Error& e) {
        throw ParseError(std::string("invalid scenario: ") + e.what());
    }
}

ScenarioFile load_scenario(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open scenario file " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_scenario(ss.str(), path.parent_path());
}

std::vector<std::vector<double>> read_table_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open table " + path.string());
    std::string line;
    if (!std::getline(in, line)) throw ParseError("empty table " + path.string());
    std::vector<std::string> header;
    {
        std::stringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) {
            while (!cell.empty() && std::isspace(static_cast<unsigned char>(cell.back())))
                cell.pop_back();
            header.push_back(cell);
        }
    }
    if (header != kTableHeader) throw ParseError("table header mismatch in " + path.string());
    std::vector<std::vector<double>> rows;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        std::vector<double> row;
        std::stringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ','))
            row.push_back(to_double("line " + std::to_string(lineno), cell.substr(0, cell.find_last_not_of(" \t\r") + 1)));
        if (row.size() != kTableHeader.size())
            throw ParseError("table line " + std::to_string(lineno) + ": expected 10 columns");
        rows.push_back(std::move(row));
    }
    return rows;
}

std::string format_number(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x == 0.0 ? 0.0 : x);  // no "-0"
    return buf;
}

CsvWriter::CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header)
    : path_(path) {
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (i) buf_ += ',';
        buf_ += header[i];
    }
    buf_ += '\n';
    flush();
}

void CsvWriter::row(const std::vector<double>& values) {
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) buf_ += ',';
        buf_ += format_number(values[i]);
    }
    buf_ += '\n';
}

void CsvWriter::flush() {
    std::ofstream out(path_, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + path_.string());
    out << buf_;
}

}  // namespace tmd
