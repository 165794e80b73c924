#include "tmd/cli.hpp"

#include <cmath>
#include <fstream>
#include <iostream>

#include <json.hpp>

#include "tmd/errors.hpp"
#include "tmd/evolution.hpp"
#include "tmd/io.hpp"
#include "tmd/oracle.hpp"
#include "tmd/riccati.hpp"
#include "tmd/smatrix.hpp"

namespace tmd {

using nlohmann::json;

Method parse_method(const std::string& s) {
    if (s == "auto") return Method::Auto;
    if (s == "closed") return Method::Closed;
    if (s == "numeric") return Method::Numeric;
    throw ParseError("method must be auto, closed or numeric");
}

OutputFormat parse_format(const std::string& s) {
    if (s == "csv") return OutputFormat::Csv;
    if (s == "json") return OutputFormat::Json;
    if (s == "both") return OutputFormat::Both;
    throw ParseError("format must be csv, json or both");
}

namespace {

struct Effective {
    ScenarioFile file;
    double t_end;
    int grid;
    double tol;
    int n_max;
    int steps;
    std::vector<double> times;

    const Scenario& sc() const { return file.scenario; }
};

Effective resolve(const RunConfig& cfg) {
    auto file = load_scenario(cfg.scenario);
    const auto& h = file.hints;
    Effective e{file,
                cfg.t_end.value_or(h.t_end.value_or(1.0)),
                cfg.grid.value_or(h.grid.value_or(101)),
                cfg.tol.value_or(h.tol.value_or(1e-10)),
                cfg.n_max.value_or(h.n_max.value_or(8)),
                cfg.steps.value_or(h.steps.value_or(4096)),
                {}};
    if (!(e.tol > 0.0 && e.tol <= 1e-2)) throw ParseError("tol must lie in (0, 1e-2]");
    if (e.grid < 2) throw ParseError("grid must be >= 2");
    if (!(e.t_end >= 0.0)) throw ParseError("t_end must be >= 0");
    if (e.n_max < 1) throw ParseError("nmax must be >= 1");
    if (e.steps < 1) throw ParseError("steps must be >= 1");
    e.times = uniform_grid(e.t_end, static_cast<std::size_t>(e.grid));
    std::filesystem::create_directories(cfg.out_dir);
    return e;
}

bool want_csv(const RunConfig& c) { return c.format != OutputFormat::Json; }
bool want_json(const RunConfig& c) { return c.format != OutputFormat::Csv; }

json cj(cplx z) { return json::array({z.real(), z.imag()}); }

void write_json(const std::filesystem::path& p, const json& j) {
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + p.string());
    out << j.dump(2) << '\n';
}

std::string ordering_name(Ordering o) {
    return o == Ordering::Standard ? "standard" : "alternative";
}

}  // namespace

int cmd_factors(const RunConfig& cfg) {
    auto e = resolve(cfg);
    auto closed = closed_ordering(e.sc());
    DisentangledFactors f;
    if (cfg.method == Method::Closed && !closed)
        throw ConditionViolated("no closed factors for this scenario");
    if (cfg.method != Method::Numeric && closed)
        f = sample_closed_factors(e.sc(), e.times);
    else
        f = solve_riccati_numeric(e.sc(), e.times, e.tol);

    std::optional<CsvWriter> csv;
    if (want_csv(cfg))
        csv.emplace(cfg.out_dir / "factors.csv",
                    std::vector<std::string>{"t", "re_Lambda", "im_Lambda", "re_Omega", "im_Omega",
                                             "re_Gamma", "im_Gamma", "chart_valid"});
    json rows = json::array();
    bool partial = false;
    for (const auto& s : f.samples) {
        if (!s.chart_valid) {
            partial = true;
            break;
        }
        if (csv)
            csv->row({s.t, s.Lambda.real(), s.Lambda.imag(), s.Omega.real(), s.Omega.imag(),
                      s.Gamma.real(), s.Gamma.imag(), 1.0});
        rows.push_back({{"t", s.t}, {"Lambda", cj(s.Lambda)}, {"Omega", cj(s.Omega)},
                        {"Gamma", cj(s.Gamma)}, {"chart_valid", true}});
    }
    if (csv) csv->flush();
    if (want_json(cfg)) {
        json j = {{"case", std::string(case_name(e.sc().kind()))},
                  {"ordering", ordering_name(f.ordering)},
                  {"samples", rows}};
        j["singular_time"] = f.singular_time ? json(*f.singular_time) : json(nullptr);
        write_json(cfg.out_dir / "factors.json", j);
    }
    if (partial) {
        std::cerr << "chart singularity near t = " << f.singular_time.value_or(NAN)
                  << "; output stops at the last valid sample\n";
        return kExitPartial;
    }
    return kExitOk;
}

int cmd_smatrix(const RunConfig& cfg) {
    auto e = resolve(cfg);
    std::vector<SMatrix2> ss;
    if (cfg.method == Method::Numeric) {
        ss = smatrix_numeric(e.sc(), e.times, e.tol);
    } else {
        try {
            for (double t : e.times) ss.push_back(smatrix_closed(e.sc(), t));
        } catch (const ConditionViolated&) {
            if (cfg.method == Method::Closed) throw;
            ss = smatrix_numeric(e.sc(), e.times, e.tol);
        }
    }
    if (want_csv(cfg)) {
        CsvWriter csv(cfg.out_dir / "smatrix.csv",
                      {"t", "re_S11", "im_S11", "re_S12", "im_S12", "re_S21", "im_S21", "re_S22",
                       "im_S22", "unitarity_defect"});
        for (const auto& s : ss)
            csv.row({s.t, s(0, 0).real(), s(0, 0).imag(), s(0, 1).real(), s(0, 1).imag(),
                     s(1, 0).real(), s(1, 0).imag(), s(1, 1).real(), s(1, 1).imag(),
                     s.unitarity_defect()});
        csv.flush();
    }
    if (want_json(cfg)) {
        json rows = json::array();
        for (const auto& s : ss)
            rows.push_back({{"t", s.t},
                            {"S", {cj(s(0, 0)), cj(s(0, 1)), cj(s(1, 0)), cj(s(1, 1))}},
                            {"unitarity_defect", s.unitarity_defect()},
                            {"reunitarized", s.reunitarized}});
        write_json(cfg.out_dir / "smatrix.json",
                   {{"case", std::string(case_name(e.sc().kind()))}, {"samples", rows}});
    }
    return kExitOk;
}

namespace {

std::array<cplx, 2> initial_amplitudes(const Scenario& sc) {
    if (sc.kind() == CaseKind::IsotropicConstant || is_time_dependent_isotropic(sc))
        return coherent_spec(sc).c_initial();
    return {sc.z0().value_or(0.0), 0.0};
}

}  // namespace

int cmd_evolve(const RunConfig& cfg) {
    auto e = resolve(cfg);
    auto c0 = initial_amplitudes(e.sc());
    auto amps = c_coefficients(e.sc(), c0, e.times, e.tol);
    if (want_csv(cfg)) {
        CsvWriter csv(cfg.out_dir / "evolve.csv",
                      {"t", "re_c1", "im_c1", "re_c2", "im_c2", "chi", "norm2"});
        for (const auto& a : amps)
            csv.row({a.t, a.c1.real(), a.c1.imag(), a.c2.real(), a.c2.imag(), a.chi, a.norm2()});
        csv.flush();
    }
    if (want_json(cfg)) {
        json rows = json::array();
        for (const auto& a : amps)
            rows.push_back({{"t", a.t}, {"c1", cj(a.c1)}, {"c2", cj(a.c2)}, {"chi", a.chi},
                            {"global_phase", cj(a.global_phase)}, {"norm2", a.norm2()}});
        write_json(cfg.out_dir / "evolve.json",
                   {{"case", std::string(case_name(e.sc().kind()))},
                    {"c_initial", {cj(c0[0]), cj(c0[1])}},
                    {"samples", rows}});
    }
    return kExitOk;
}

int cmd_coherent(const RunConfig& cfg) {
    auto e = resolve(cfg);
    const auto& sc = e.sc();
    auto spec = coherent_spec(sc);
    CoherentCase law = sc.kind() == CaseKind::IsotropicConstant ? CoherentCase::Isotropic
                       : sc.kind() == CaseKind::RhoConstant     ? CoherentCase::RhoConstant
                                                                : CoherentCase::LogRho;
    std::vector<CoherentAmplitudes> amps;
    if (cfg.method == Method::Numeric) {
        amps = c_coefficients(sc, spec.c_initial(), e.times, e.tol);
    } else {
        for (double t : e.times) amps.push_back(coherent_evolution_closed(law, sc, spec, t));
    }
    auto space = make_space(e.n_max);
    std::vector<double> residuals;
    for (const auto& a : amps)
        residuals.push_back(ladder_eigenvalue_check(space, spec, a, sc).residual);

    if (want_csv(cfg)) {
        CsvWriter csv(cfg.out_dir / "coherent.csv",
                      {"t", "re_c1", "im_c1", "re_c2", "im_c2", "norm2", "eigen_residual"});
        for (std::size_t k = 0; k < amps.size(); ++k) {
            const auto& a = amps[k];
            csv.row({a.t, a.c1.real(), a.c1.imag(), a.c2.real(), a.c2.imag(), a.norm2(),
                     residuals[k]});
        }
        csv.flush();
    }
    if (want_json(cfg)) {
        json rows = json::array();
        for (std::size_t k = 0; k < amps.size(); ++k)
            rows.push_back({{"t", amps[k].t}, {"c1", cj(amps[k].c1)}, {"c2", cj(amps[k].c2)},
                            {"norm2", amps[k].norm2()}, {"eigen_residual", residuals[k]}});
        write_json(cfg.out_dir / "coherent.json",
                   {{"case", std::string(case_name(sc.kind()))},
                    {"Z0", cj(spec.Z0)},
                    {"samples", rows}});
    }
    return kExitOk;
}

namespace {

struct Check {
    std::string name;
    double value;
    double tolerance;
    bool passed;
    std::string detail;
};

json to_json(const Check& c) {
    return {{"name", c.name}, {"value", c.value}, {"tolerance", c.tolerance},
            {"passed", c.passed}, {"detail", c.detail}};
}

Check upper(std::string name, double value, double tol, std::string detail = {}) {
    return {std::move(name), value, tol, std::isfinite(value) && value <= tol, std::move(detail)};
}

// Deliberately broken factors for the negative control.
FactorSample corrupt(FactorSample f) {
    f.Gamma = -f.Gamma;
    return f;
}

}  // namespace

int cmd_verify(const RunConfig& cfg) {
    auto e = resolve(cfg);
    const auto& sc = e.sc();
    const double t = e.t_end;
    std::vector<Check> checks;

    // 2x2 carrier: adaptive solution against the exact-step product and the determinant law.
    constexpr int kCarrierSteps = 4096;
    double s_dev = 0.0, s_det = 0.0, s_unit = 0.0;
    std::vector<SMatrix2> numeric = smatrix_numeric(sc, e.times, e.tol);
    for (const auto& s : numeric) {
        auto bf = brute_force_smatrix(sc, s.t, kCarrierSteps);
        s_dev = std::max(s_dev, (s.m - bf.m).cwiseAbs().maxCoeff());
        s_det = std::max(s_det, std::abs(s.det() - std::exp(-I * alpha_rho(sc, s.t).alpha)));
        s_unit = std::max(s_unit, s.unitarity_defect());
    }
    checks.push_back(upper("smatrix_oracle", s_dev, 1e-6));
    checks.push_back(upper("smatrix_unitarity", s_unit, 1e-9));
    checks.push_back(upper("smatrix_determinant", s_det, 1e-9));

    // Closed elements, where the case has them.
    try {
        double dev = 0.0;
        for (const auto& s : numeric)
            dev = std::max(dev, (smatrix_closed(sc, s.t).m - s.m).cwiseAbs().maxCoeff());
        checks.push_back(upper("smatrix_closed", dev, 1e-7));
    } catch (const ConditionViolated&) {
    }

    // Factor reconstruction on the valid part of the chart.
    {
        auto closed = closed_ordering(sc);
        DisentangledFactors f = closed && cfg.method != Method::Numeric
                                    ? sample_closed_factors(sc, e.times)
                                    : solve_riccati_numeric(sc, e.times, e.tol);
        double dev = 0.0;
        int used = 0;
        for (std::size_t k = 0; k < f.samples.size(); ++k) {
            const auto& s = f.samples[k];
            if (!s.chart_valid || std::abs(s.Lambda) > 1e4) continue;
            auto rec = smatrix_from_factors(cfg.corrupt_factors ? corrupt(s) : s, f.ordering);
            dev = std::max(dev, (rec.m - numeric[k].m).cwiseAbs().maxCoeff());
            ++used;
        }
        checks.push_back(upper("factor_reconstruction", dev, 1e-7,
                               std::to_string(used) + " samples on the valid chart"));
    }

    // Full Fock space against the ordered product.
    auto space = make_space(e.n_max);
    auto bf = brute_force_propagator(space, sc, t, e.steps);
    checks.push_back(upper("propagator_unitarity", unitarity_defect(bf), 1e-9));

    const int n0 = std::max(1, e.steps / 4);
    auto conv = self_convergence(space, sc, t, n0);
    {
        // A step-independent product (constant H) has nothing to converge.
        bool flat = conv.coarse_deviation < 1e-12;
        bool ok = flat || (conv.ratio >= 3.5 && conv.ratio <= 4.5);
        checks.push_back({"oracle_self_convergence", conv.ratio, 4.0, ok,
                          flat ? "product independent of step size" : "ratio must lie in [3.5, 4.5]"});
    }

    TwoModeOperator u = assemble_U(space, sc, t, e.tol);
    if (cfg.corrupt_factors && closed_ordering(sc)) {
        Ordering ord = *closed_ordering(sc);
        auto f = sample_closed_factors(sc, std::vector<double>{0.0, t}).samples.back();
        if (f.chart_valid) {
            auto amp = c_coefficients(sc, {0.0, 0.0}, t, e.tol);
            u = displacement_operator(space, amp.c1, amp.c2) *
                (amp.global_phase * u0_from_factors(space, corrupt(f), ord));
        }
    }
    std::vector<FockState> states;
    for (auto [c1, c2] : std::vector<std::pair<cplx, cplx>>{
             {0.0, 0.0}, {0.5, 0.0}, {0.0, 0.5 * I}, {cplx(0.3, 0.2), -0.25}, {0.35, 0.35 * I}})
        states.push_back(coherent_state(space, c1, c2).normalized());
    auto rep = compare_operators(u, bf, states);
    checks.push_back({"propagator_fidelity", rep.min_fidelity(), 1.0 - 1e-6,
                      rep.min_fidelity() >= 1.0 - 1e-6, "minimum over 5 coherent test states"});

    json jchecks = json::array();
    json failed = json::array();
    for (const auto& c : checks) {
        jchecks.push_back(to_json(c));
        if (!c.passed) failed.push_back(c.name);
    }
    json j = {{"case", std::string(case_name(sc.kind()))},
              {"t", t},
              {"n_max", e.n_max},
              {"steps", e.steps},
              {"checks", jchecks},
              {"comparison",
               {{"max_entry_deviation", rep.max_entry_deviation},
                {"fidelities", rep.fidelities},
                {"determinant_ratio", cj(rep.determinant_ratio)},
                {"determinant_deviation", rep.determinant_deviation},
                {"notes", rep.notes}}},
              {"convergence",
               {{"steps", conv.steps},
                {"coarse_deviation", conv.coarse_deviation},
                {"fine_deviation", conv.fine_deviation},
                {"ratio", conv.ratio}}},
              {"passed", failed.empty()},
              {"failed", failed}};
    write_json(cfg.out_dir / "verify.json", j);
    for (const auto& c : checks)
        if (!c.passed)
            std::cerr << "check failed: " << c.name << " (value " << c.value << ", tolerance "
                      << c.tolerance << ")\n";
    return failed.empty() ? kExitOk : kExitError;
}

int run_command(const RunConfig& cfg) {
    try {
        if (cfg.command == "factors") return cmd_factors(cfg);
        if (cfg.command == "smatrix") return cmd_smatrix(cfg);
        if (cfg.command == "evolve") return cmd_evolve(cfg);
        if (cfg.command == "coherent") return cmd_coherent(cfg);
        if (cfg.command == "verify") return cmd_verify(cfg);
        std::cerr << "unknown command '" << cfg.command << "'\n";
    } catch (const ChartSingularity& e) {
        std::cerr << "error: " << e.what() << " (t = " << e.time() << ")\n";
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
    }
    return kExitError;
}

}  // namespace tmd
