#include "rislab/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <thread>

namespace rislab {

namespace {

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(trim(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(trim(cur));
    return out;
}

double parse_number(const std::string& field, const std::string& v) {
    try {
        size_t pos = 0;
        double d = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("trailing characters");
        return d;
    } catch (const std::exception&) {
        throw SpecError(field + ": expected a number, got '" + v + "'");
    }
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

struct KvSection {
    std::string name;
    std::vector<std::pair<std::string, std::string>> entries;
};

std::vector<KvSection> parse_kv(const std::string& text) {
    std::vector<KvSection> sections;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw SpecError("line " + std::to_string(lineno) + ": unterminated section header");
            sections.push_back({trim(line.substr(1, line.size() - 2)), {}});
            continue;
        }
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw SpecError("line " + std::to_string(lineno) + ": expected key = value");
        if (sections.empty())
            throw SpecError("line " + std::to_string(lineno) + ": entry outside any section");
        sections.back().entries.emplace_back(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    return sections;
}

// Named override targets shared by sweeps and curves.
void apply_override(const std::string& field, const std::string& key, double v,
                    SystemConfig& sys, NomaConfig& noma, SecrecyCode& code) {
    if (key == "m") code.m = static_cast<int>(std::llround(v));
    else if (key == "b") code.b = v;
    else if (key == "delta") code.delta = v;
    else if (key == "p_g_dbw") sys.p_g_dbw = v;
    else if (key == "n_elements") sys.n_elements = static_cast<int>(std::llround(v));
    else if (key == "a_a") noma.a_a = v;
    else if (key == "omega_sic") noma.omega_sic = v;
    else if (key == "omega_i") noma.omega_i = v;
    else if (key == "d_gr_m") sys.d_gr_m = v;
    else if (key == "d_ra_m") sys.d_ra_m = v;
    else if (key == "d_ge_m") sys.d_ge_m = v;
    else if (key == "alpha") sys.alpha = v;
    else if (key == "k_gr_db") sys.k_gr_db = v;
    else if (key == "k_ra_db") sys.k_ra_db = v;
    else if (key == "omega_gr") sys.omega_gr = v;
    else if (key == "omega_ra") sys.omega_ra = v;
    else if (key == "sigma2_a") sys.sigma2_a = v;
    else if (key == "sigma2_e") sys.sigma2_e = v;
    else throw SpecError(field + ": unknown parameter '" + key + "'");
}

AstKind parse_series_name(const std::string& field, const std::string& s) {
    if (s == "analytic") return AstKind::analytic;
    if (s == "asymptotic") return AstKind::asymptotic;
    if (s == "infinite_blocklength") return AstKind::infinite_blocklength;
    if (s == "monte_carlo") return AstKind::monte_carlo;
    throw SpecError(field + ": unknown series '" + s + "'");
}

std::string curve_label(const CurveOverrides& c) {
    if (c.empty()) return "base";
    std::string s;
    for (size_t i = 0; i < c.size(); ++i) {
        if (i) s += ';';
        s += c[i].first + '=' + fmt(c[i].second);
    }
    return s;
}

template <class Fn>
void parallel_tasks(size_t n, int threads, Fn&& fn) {
    int workers = std::min<size_t>(std::max(1, threads), n);
    if (workers <= 1) {
        for (size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<size_t> next{0};
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (size_t i; (i = next.fetch_add(1)) < n;) fn(i);
        });
    for (auto& t : pool) t.join();
}

std::string sanitize_note(std::string s) {
    std::replace(s.begin(), s.end(), ',', ';');
    std::replace(s.begin(), s.end(), '\n', ' ');
    return s;
}

}  // namespace

std::string version_string() { return "rislab-0.1.0"; }

std::vector<double> ExperimentSpec::sweep_values() const {
    std::vector<double> vals;
    for (double v = sweep_start; v <= sweep_stop + 1e-9 * std::max(1.0, std::abs(sweep_stop));
         v += sweep_step) {
        vals.push_back(v);
        if (sweep_step <= 0.0) break;
    }
    return vals;
}

void ExperimentSpec::validate() const {
    if (sweep_step <= 0.0) throw SpecError("[experiment].sweep_step: must be positive");
    if (sweep_stop < sweep_start) throw SpecError("[experiment].sweep_stop: must be >= sweep_start");
    if (kind == ExperimentKind::sweep && series.empty())
        throw SpecError("[experiment].series: at least one series required");
    static const char* sweepable[] = {"m", "b", "p_g_dbw", "n_elements", "a_a", "delta"};
    if (std::find_if(std::begin(sweepable), std::end(sweepable),
                     [&](const char* s) { return sweep_var == s; }) == std::end(sweepable))
        throw SpecError("[experiment].sweep: unsupported sweep variable '" + sweep_var + "'");
    for (const auto& curve : curves)
        for (const auto& [k, v] : curve)
            if (k == sweep_var)
                throw SpecError("[experiment].curves: curve overrides the sweep variable '" + k + "'");
    if (scenario == Scenario::internal && !has_noma)
        throw SpecError("[noma]: section required for the internal scenario");
    if (kind == ExperimentKind::optimizer && (m_lo < 1 || m_lo > m_hi))
        throw SpecError("[optimizer]: invalid blocklength bounds");
    try {
        system.validate();
        code.validate();
        plan.validate();
        if (has_noma) noma.validate();
    } catch (const std::exception& e) {
        throw SpecError(std::string("config: ") + e.what());
    }
}

ExperimentSpec parse_experiment(const std::string& text) {
    ExperimentSpec spec;
    auto sections = parse_kv(text);
    for (const auto& sec : sections) {
        std::string where = "[" + sec.name + "]";
        if (sec.name == "experiment") {
            for (const auto& [k, v] : sec.entries) {
                std::string field = where + "." + k;
                if (k == "name") spec.name = v;
                else if (k == "kind") {
                    if (v == "sweep") spec.kind = ExperimentKind::sweep;
                    else if (v == "optimizer") spec.kind = ExperimentKind::optimizer;
                    else throw SpecError(field + ": expected sweep|optimizer");
                } else if (k == "scenario") {
                    if (v == "external") spec.scenario = Scenario::external;
                    else if (v == "internal") spec.scenario = Scenario::internal;
                    else throw SpecError(field + ": expected external|internal");
                } else if (k == "sweep") spec.sweep_var = v;
                else if (k == "sweep_start") spec.sweep_start = parse_number(field, v);
                else if (k == "sweep_stop") spec.sweep_stop = parse_number(field, v);
                else if (k == "sweep_step") spec.sweep_step = parse_number(field, v);
                else if (k == "series") {
                    spec.series.clear();
                    for (const auto& s : split(v, ','))
                        if (!s.empty()) spec.series.push_back(parse_series_name(field, s));
                } else if (k == "curves") {
                    spec.curves.clear();
                    for (const auto& part : split(v, '|')) {
                        CurveOverrides curve;
                        for (const auto& kv : split(part, ',')) {
                            if (kv.empty()) continue;
                            auto eq = kv.find('=');
                            if (eq == std::string::npos)
                                throw SpecError(field + ": curve entries must be key=value");
                            curve.emplace_back(trim(kv.substr(0, eq)),
                                               parse_number(field, trim(kv.substr(eq + 1))));
                        }
                        spec.curves.push_back(std::move(curve));
                    }
                } else throw SpecError(field + ": unknown key");
            }
        } else if (sec.name == "system") {
            for (const auto& [k, v] : sec.entries)
                apply_override(where + "." + k, k, parse_number(where + "." + k, v), spec.system,
                               spec.noma, spec.code);
        } else if (sec.name == "noma") {
            spec.has_noma = true;
            for (const auto& [k, v] : sec.entries)
                apply_override(where + "." + k, k, parse_number(where + "." + k, v), spec.system,
                               spec.noma, spec.code);
        } else if (sec.name == "code") {
            for (const auto& [k, v] : sec.entries)
                apply_override(where + "." + k, k, parse_number(where + "." + k, v), spec.system,
                               spec.noma, spec.code);
        } else if (sec.name == "sim") {
            for (const auto& [k, v] : sec.entries) {
                std::string field = where + "." + k;
                if (k == "realizations")
                    spec.plan.realizations = static_cast<std::int64_t>(parse_number(field, v));
                else if (k == "seed")
                    spec.plan.seed = static_cast<std::uint64_t>(parse_number(field, v));
                else if (k == "batch")
                    spec.plan.batch = static_cast<std::int64_t>(parse_number(field, v));
                else throw SpecError(field + ": unknown key");
            }
        } else if (sec.name == "constraints") {
            OptConstraints cons;
            for (const auto& [k, v] : sec.entries) {
                std::string field = where + "." + k;
                if (k == "eps_th") cons.eps_th = parse_number(field, v);
                else if (k == "m_th") cons.m_th = parse_number(field, v);
                else throw SpecError(field + ": unknown key");
            }
            spec.constraints = cons;
        } else if (sec.name == "optimizer") {
            for (const auto& [k, v] : sec.entries) {
                std::string field = where + "." + k;
                if (k == "m_lo") spec.m_lo = static_cast<int>(parse_number(field, v));
                else if (k == "m_hi") spec.m_hi = static_cast<int>(parse_number(field, v));
                else throw SpecError(field + ": unknown key");
            }
        } else {
            throw SpecError(where + ": unknown section");
        }
    }
    spec.plan.scenario = spec.scenario;
    spec.validate();
    return spec;
}

std::string serialize_experiment(const ExperimentSpec& spec) {
    std::ostringstream os;
    os << "[experiment]\n";
    os << "name = " << spec.name << "\n";
    os << "kind = " << (spec.kind == ExperimentKind::sweep ? "sweep" : "optimizer") << "\n";
    os << "scenario = " << to_string(spec.scenario) << "\n";
    os << "sweep = " << spec.sweep_var << "\n";
    os << "sweep_start = " << fmt(spec.sweep_start) << "\n";
    os << "sweep_stop = " << fmt(spec.sweep_stop) << "\n";
    os << "sweep_step = " << fmt(spec.sweep_step) << "\n";
    if (!spec.series.empty()) {
        os << "series = ";
        for (size_t i = 0; i < spec.series.size(); ++i)
            os << (i ? ", " : "") << to_string(spec.series[i]);
        os << "\n";
    }
    if (!spec.curves.empty()) {
        os << "curves = ";
        for (size_t i = 0; i < spec.curves.size(); ++i) {
            if (i) os << " | ";
            for (size_t j = 0; j < spec.curves[i].size(); ++j)
                os << (j ? ", " : "") << spec.curves[i][j].first << " = "
                   << fmt(spec.curves[i][j].second);
        }
        os << "\n";
    }
    const auto& s = spec.system;
    os << "\n[system]\n";
    os << "d_gr_m = " << fmt(s.d_gr_m) << "\nd_ra_m = " << fmt(s.d_ra_m)
       << "\nd_ge_m = " << fmt(s.d_ge_m) << "\nalpha = " << fmt(s.alpha)
       << "\nk_gr_db = " << fmt(s.k_gr_db) << "\nk_ra_db = " << fmt(s.k_ra_db)
       << "\nomega_gr = " << fmt(s.omega_gr) << "\nomega_ra = " << fmt(s.omega_ra)
       << "\nn_elements = " << s.n_elements << "\np_g_dbw = " << fmt(s.p_g_dbw)
       << "\nsigma2_a = " << fmt(s.sigma2_a) << "\nsigma2_e = " << fmt(s.sigma2_e) << "\n";
    if (spec.has_noma) {
        os << "\n[noma]\n";
        os << "a_a = " << fmt(spec.noma.a_a) << "\nomega_sic = " << fmt(spec.noma.omega_sic)
           << "\nomega_i = " << fmt(spec.noma.omega_i) << "\n";
    }
    os << "\n[code]\n";
    os << "m = " << spec.code.m << "\nb = " << fmt(spec.code.b)
       << "\ndelta = " << fmt(spec.code.delta) << "\n";
    os << "\n[sim]\n";
    os << "realizations = " << spec.plan.realizations << "\nseed = " << spec.plan.seed
       << "\nbatch = " << spec.plan.batch << "\n";
    if (spec.constraints) {
        os << "\n[constraints]\n";
        os << "eps_th = " << fmt(spec.constraints->eps_th)
           << "\nm_th = " << fmt(spec.constraints->m_th) << "\n";
    }
    if (spec.kind == ExperimentKind::optimizer) {
        os << "\n[optimizer]\n";
        os << "m_lo = " << spec.m_lo << "\nm_hi = " << spec.m_hi << "\n";
    }
    return os.str();
}

std::string ResultTable::to_csv(bool with_timestamp) const {
    std::ostringstream os;
    if (with_timestamp) {
        std::time_t t = std::time(nullptr);
        char buf[64];
        std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
        os << "# timestamp=" << buf << "\n";
    }
    os << "# " << provenance << "\n";
    os << "sweep_var,sweep_value,series,ast_bpcu,sem,eps_bar,m_star,notes\n";
    for (const auto& r : rows) {
        os << r.sweep_var << ',' << fmt(r.sweep_value) << ',' << r.series << ','
           << (r.ast_bpcu ? fmt(*r.ast_bpcu) : "") << ',' << (r.sem ? fmt(*r.sem) : "") << ','
           << (r.eps_bar ? fmt(*r.eps_bar) : "") << ','
           << (r.m_star ? std::to_string(*r.m_star) : "") << ',' << r.notes << "\n";
    }
    return os.str();
}

namespace {

std::string provenance_line(const ExperimentSpec& spec) {
    std::ostringstream os;
    os << version_string() << " name=" << spec.name << " scenario=" << to_string(spec.scenario)
       << " seed=" << spec.plan.seed << " realizations=" << spec.plan.realizations
       << " config_hash=" << std::hex << fnv1a(serialize_experiment(spec));
    return os.str();
}

struct PointConfigs {
    SystemConfig sys;
    NomaConfig noma;
    SecrecyCode code;
};

PointConfigs configs_at(const ExperimentSpec& spec, const CurveOverrides& curve, double v) {
    PointConfigs pc{spec.system, spec.noma, spec.code};
    for (const auto& [k, val] : curve) apply_override("curve." + k, k, val, pc.sys, pc.noma, pc.code);
    apply_override("sweep." + spec.sweep_var, spec.sweep_var, v, pc.sys, pc.noma, pc.code);
    return pc;
}

}  // namespace

ResultTable run_experiment(const ExperimentSpec& spec, int threads) {
    spec.validate();
    if (spec.kind != ExperimentKind::sweep)
        throw SpecError("run_experiment: spec kind is not 'sweep'");
    ResultTable table;
    table.name = spec.name;
    table.provenance = provenance_line(spec);

    auto values = spec.sweep_values();
    std::vector<CurveOverrides> curves = spec.curves;
    if (curves.empty()) curves.push_back({});

    struct Task { size_t vi, ci, si; };
    std::vector<Task> tasks;
    for (size_t vi = 0; vi < values.size(); ++vi)
        for (size_t ci = 0; ci < curves.size(); ++ci)
            for (size_t si = 0; si < spec.series.size(); ++si) tasks.push_back({vi, ci, si});

    std::vector<ResultRow> rows(tasks.size());
    parallel_tasks(tasks.size(), resolve_threads(threads), [&](size_t ti) {
        const Task& t = tasks[ti];
        double v = values[t.vi];
        AstKind kind = spec.series[t.si];
        ResultRow row;
        row.sweep_var = spec.sweep_var;
        row.sweep_value = v;
        row.series = to_string(kind);
        row.notes = curve_label(curves[t.ci]);
        try {
            PointConfigs pc = configs_at(spec, curves[t.ci], v);
            auto fit = fit_cascade(pc.sys);
            AstResult res;
            if (spec.scenario == Scenario::external) {
                switch (kind) {
                    case AstKind::analytic: res = ast_external(pc.sys, fit, pc.code); break;
                    case AstKind::asymptotic:
                        res = ast_external_asymptotic(pc.sys, fit, pc.code);
                        break;
                    case AstKind::infinite_blocklength:
                        res = ast_external_infblock(pc.sys, fit, pc.code);
                        break;
                    case AstKind::monte_carlo: {
                        SimPlan plan = spec.plan;
                        plan.scenario = Scenario::external;
                        res = simulate_ast(pc.sys, std::nullopt, pc.code, plan, 1);
                        break;
                    }
                }
            } else {
                switch (kind) {
                    case AstKind::analytic: res = ast_internal(pc.sys, pc.noma, fit, pc.code); break;
                    case AstKind::asymptotic:
                        res = ast_internal_asymptotic(pc.sys, pc.noma, fit, pc.code,
                                                      pc.noma.omega_sic == 0.0);
                        break;
                    case AstKind::infinite_blocklength:
                        res = ast_internal_infblock(pc.sys, pc.noma, fit, pc.code);
                        break;
                    case AstKind::monte_carlo: {
                        SimPlan plan = spec.plan;
                        plan.scenario = Scenario::internal;
                        res = simulate_ast(pc.sys, pc.noma, pc.code, plan, 1);
                        break;
                    }
                }
            }
            row.ast_bpcu = res.value;
            if (res.kind == AstKind::monte_carlo) row.sem = res.sem;
            row.eps_bar = res.eps_bar;
        } catch (const std::exception& e) {
            row.notes += std::string(";error:") + sanitize_note(e.what());
        }
        rows[ti] = std::move(row);
    });
    table.rows = std::move(rows);
    return table;
}

ResultTable run_optimizer_sweep(const ExperimentSpec& spec, int threads) {
    spec.validate();
    ResultTable table;
    table.name = spec.name;
    table.provenance = provenance_line(spec);

    auto values = spec.sweep_values();
    std::vector<CurveOverrides> curves = spec.curves;
    if (curves.empty()) curves.push_back({});

    struct Task { size_t vi, ci; };
    std::vector<Task> tasks;
    for (size_t ci = 0; ci < curves.size(); ++ci)
        for (size_t vi = 0; vi < values.size(); ++vi) tasks.push_back({vi, ci});

    std::vector<ResultRow> rows(tasks.size());
    parallel_tasks(tasks.size(), resolve_threads(threads), [&](size_t ti) {
        const Task& t = tasks[ti];
        double v = values[t.vi];
        ResultRow row;
        row.sweep_var = spec.sweep_var;
        row.sweep_value = v;
        row.series = "optimizer";
        row.notes = curve_label(curves[t.ci]);
        try {
            PointConfigs pc = configs_at(spec, curves[t.ci], v);
            std::optional<NomaConfig> noma =
                spec.scenario == Scenario::internal ? std::optional<NomaConfig>(pc.noma)
                                                    : std::nullopt;
            AstCurve curve = make_analytic_curve(pc.sys, noma, pc.code, spec.scenario);
            OptResult opt = spec.constraints
                                ? optimize_constrained(curve, *spec.constraints, spec.m_lo, spec.m_hi)
                                : optimize_unconstrained(curve, spec.m_lo, spec.m_hi);
            row.m_star = opt.m_star;
            row.ast_bpcu = opt.ast_at_star;
            row.eps_bar = curve.eps(opt.m_star);
            row.notes += std::string(";") + to_string(opt.binding);
            if (!opt.feasible) row.notes += ";infeasible";
        } catch (const std::exception& e) {
            row.notes += std::string(";error:") + sanitize_note(e.what());
        }
        rows[ti] = std::move(row);
    });
    table.rows = std::move(rows);

    // Monotone-trend summary per curve.
    std::ostringstream sum;
    for (size_t ci = 0; ci < curves.size(); ++ci) {
        bool ast_nondecreasing = true, m_nonincreasing = true;
        const ResultRow* prev = nullptr;
        for (size_t vi = 0; vi < values.size(); ++vi) {
            const ResultRow& r = table.rows[ci * values.size() + vi];
            if (!r.ast_bpcu) continue;
            if (prev && prev->ast_bpcu) {
                if (*r.ast_bpcu < *prev->ast_bpcu - 1e-12) ast_nondecreasing = false;
                if (r.m_star && prev->m_star && *r.m_star > *prev->m_star) m_nonincreasing = false;
            }
            prev = &r;
        }
        sum << "curve " << curve_label(curves[ci]) << ": optimal AST "
            << (ast_nondecreasing ? "nondecreasing" : "not monotone") << ", m* "
            << (m_nonincreasing ? "nonincreasing" : "not monotone") << " along " << spec.sweep_var
            << "\n";
    }
    table.summary = sum.str();
    return table;
}

void write_csv_atomic(const ResultTable& table, const std::string& path) {
    std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary);
        if (!out) throw std::runtime_error("write_csv_atomic: cannot open " + tmp);
        out << table.to_csv(true);
    }
    std::filesystem::rename(tmp, path);
}

std::string gnuplot_script(const ExperimentSpec& spec, const std::string& csv_filename) {
    std::vector<CurveOverrides> curves = spec.curves;
    if (curves.empty()) curves.push_back({});
    std::ostringstream os;
    os << "# gnuplot script generated by " << version_string() << " for " << spec.name << "\n";
    os << "set datafile separator ','\n";
    os << "set terminal pngcairo size 900,600\n";
    os << "set output '" << spec.name << ".png'\n";
    os << "set xlabel '" << spec.sweep_var << "'\n";
    os << "set ylabel 'AST (BPCU)'\n";
    os << "set key outside\n";
    os << "plot \\\n";
    std::vector<std::string> series_names;
    if (spec.kind == ExperimentKind::optimizer) {
        series_names.push_back("optimizer");
    } else {
        for (auto s : spec.series) series_names.push_back(to_string(s));
    }
    bool first = true;
    for (const auto& curve : curves) {
        std::string label = curve_label(curve);
        for (const auto& sname : series_names) {
            if (!first) os << ", \\\n";
            first = false;
            os << "  '" << csv_filename << "' using (strcol(3) eq '" << sname
               << "' && strcol(8) eq '" << label
               << "' ? $2 : NaN):4 with linespoints title '" << sname << " " << label << "'";
        }
    }
    os << "\n";
    return os.str();
}

}  // namespace rislab
