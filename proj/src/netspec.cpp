#include "nlocal/netspec.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace nlocal {

using nlohmann::json;

namespace {

std::string line_of_offset(const std::string& text, std::size_t byte) {
    std::size_t line = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i)
        if (text[i] == '\n')
            ++line;
    return std::to_string(line);
}

json parse_json(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw InputError("spec file is not valid JSON (line " +
                         line_of_offset(text, e.byte) + "): " + e.what());
    }
}

double number_at(const json& j, const std::string& path) {
    if (!j.is_number())
        throw InputError("field '" + path + "' must be a number");
    return j.get<double>();
}

cplx complex_at(const json& j, const std::string& path) {
    if (!j.is_array() || j.size() != 2)
        throw InputError("field '" + path + "' must be a [re, im] pair");
    return {number_at(j[0], path + "[0]"), number_at(j[1], path + "[1]")};
}

std::string string_at(const json& j, const std::string& path) {
    if (!j.is_string())
        throw InputError("field '" + path + "' must be a string");
    return j.get<std::string>();
}

const json& require(const json& j, const std::string& key, const std::string& path) {
    if (!j.contains(key))
        throw InputError("missing field '" + (path.empty() ? key : path + "." + key) + "'");
    return j.at(key);
}

StateSpec parse_state_spec(const json& j, const std::string& path) {
    if (!j.is_object())
        throw InputError("field '" + path + "' must be an object");
    const std::string family = string_at(require(j, "family", path), path + ".family");
    if (family == "bell") {
        BellSpec s;
        s.label = bell_label_from_name(string_at(require(j, "label", path), path + ".label"));
        return s;
    }
    if (family == "werner") {
        WernerSpec s;
        s.v = number_at(require(j, "v", path), path + ".v");
        if (j.contains("base"))
            s.base = bell_label_from_name(string_at(j.at("base"), path + ".base"));
        return s;
    }
    if (family == "pure") {
        const json& amps = require(j, "amplitudes", path);
        if (!amps.is_array() || amps.size() != 4)
            throw InputError("field '" + path + ".amplitudes' must hold 4 [re, im] pairs");
        PureSpec s;
        for (int i = 0; i < 4; ++i)
            s.amplitudes[static_cast<std::size_t>(i)] =
                complex_at(amps[static_cast<std::size_t>(i)],
                           path + ".amplitudes[" + std::to_string(i) + "]");
        return s;
    }
    if (family == "bloch") {
        BlochSpec s;
        auto vec3 = [&](const char* key) {
            const json& v = require(j, key, path);
            if (!v.is_array() || v.size() != 3)
                throw InputError("field '" + path + "." + key + "' must hold 3 numbers");
            return Vec3{number_at(v[0], path), number_at(v[1], path), number_at(v[2], path)};
        };
        s.form.m_a = vec3("mA");
        s.form.m_b = vec3("mB");
        const json& t = require(j, "t", path);
        if (!t.is_array() || t.size() != 9)
            throw InputError("field '" + path + ".t' must hold 9 numbers (row-major 3x3)");
        for (int i = 0; i < 9; ++i)
            s.form.t[static_cast<std::size_t>(i)] =
                number_at(t[static_cast<std::size_t>(i)], path + ".t");
        return s;
    }
    if (family == "dense") {
        const json& rho = require(j, "rho", path);
        if (!rho.is_array() || rho.size() != 16)
            throw InputError("field '" + path +
                             ".rho' must hold 16 [re, im] pairs (row-major 4x4)");
        DenseSpec s;
        s.rho = ComplexMatrix(4);
        for (int i = 0; i < 16; ++i)
            s.rho.a[static_cast<std::size_t>(i)] = complex_at(
                rho[static_cast<std::size_t>(i)], path + ".rho[" + std::to_string(i) + "]");
        return s;
    }
    throw InputError("field '" + path + ".family': unknown family '" + family +
                     "' (expected bell, werner, pure, bloch or dense)");
}

json state_spec_to_json(const StateSpec& spec) {
    json j;
    std::visit(
        [&](const auto& s) {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, BellSpec>) {
                j["family"] = "bell";
                j["label"] = bell_label_name(s.label);
            } else if constexpr (std::is_same_v<T, WernerSpec>) {
                j["family"] = "werner";
                j["v"] = s.v;
                j["base"] = bell_label_name(s.base);
            } else if constexpr (std::is_same_v<T, PureSpec>) {
                j["family"] = "pure";
                json amps = json::array();
                for (const cplx& a : s.amplitudes)
                    amps.push_back({a.real(), a.imag()});
                j["amplitudes"] = std::move(amps);
            } else if constexpr (std::is_same_v<T, BlochSpec>) {
                j["family"] = "bloch";
                j["mA"] = s.form.m_a;
                j["mB"] = s.form.m_b;
                j["t"] = s.form.t;
            } else {
                j["family"] = "dense";
                json rho = json::array();
                for (const cplx& z : s.rho.a)
                    rho.push_back({z.real(), z.imag()});
                j["rho"] = std::move(rho);
            }
        },
        spec);
    return j;
}

Convention convention_from_name(const std::string& name) {
    if (name == "normalized")
        return Convention::normalized;
    if (name == "paper_scale")
        return Convention::paper_scale;
    throw InputError("field 'convention': unknown value '" + name +
                     "' (expected normalized or paper_scale)");
}

const char* convention_name(Convention c) {
    return c == Convention::normalized ? "normalized" : "paper_scale";
}

const char* topology_name(Topology t) { return t == Topology::chain ? "chain" : "star"; }

NetworkSpec network_spec_from_json(const json& j) {
    if (!j.is_object())
        throw InputError("spec file must hold a JSON object");
    NetworkSpec spec;
    const std::string topology = string_at(require(j, "topology", ""), "topology");
    if (topology == "chain")
        spec.topology = Topology::chain;
    else if (topology == "star")
        spec.topology = Topology::star;
    else
        throw InputError("field 'topology': unknown value '" + topology +
                         "' (expected chain or star)");
    if (j.contains("convention"))
        spec.convention = convention_from_name(string_at(j.at("convention"), "convention"));
    const json& sources = require(j, "sources", "");
    if (!sources.is_array() || sources.size() < 2)
        throw InputError("field 'sources' must hold at least 2 state specs");
    for (std::size_t i = 0; i < sources.size(); ++i)
        spec.sources.push_back(
            parse_state_spec(sources[i], "sources[" + std::to_string(i) + "]"));
    return spec;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw InputError("cannot open spec file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int replace_sweep_markers(json& j, double value) {
    int count = 0;
    if (j.is_string() && j.get<std::string>() == "sweep") {
        j = value;
        return 1;
    }
    if (j.is_array() || j.is_object())
        for (auto& el : j)
            count += replace_sweep_markers(el, value);
    return count;
}

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

} // namespace

NetworkSpec parse_network_spec(const std::string& json_text) {
    return network_spec_from_json(parse_json(json_text));
}

NetworkSpec load_network_spec(const std::string& path) {
    return parse_network_spec(read_file(path));
}

SweepSpec parse_sweep_spec(const std::string& json_text) {
    json j = parse_json(json_text);
    if (!j.is_object() || !j.contains("sweep"))
        throw InputError("sweep spec needs a 'sweep' object with lo, hi and step");
    const json& s = j.at("sweep");
    SweepSpec spec;
    spec.range.lo = number_at(require(s, "lo", "sweep"), "sweep.lo");
    spec.range.hi = number_at(require(s, "hi", "sweep"), "sweep.hi");
    spec.range.step = number_at(require(s, "step", "sweep"), "sweep.step");
    if (!(spec.range.lo < spec.range.hi))
        throw InputError("sweep range: lo must be strictly below hi");
    if (!(spec.range.step > 0.0))
        throw InputError("sweep range: step must be positive");
    if ((spec.range.hi - spec.range.lo) / spec.range.step > 1e6)
        throw InputError("sweep range: more than 1e6 grid points");

    json probe = j;
    probe.erase("sweep");
    spec.marker_count = replace_sweep_markers(probe, spec.range.lo);
    if (spec.marker_count < 1)
        throw InputError("sweep spec has no \"sweep\" marker in any scalar slot");
    network_spec_from_json(probe); // validate the instantiated template once
    json templ = j;
    templ.erase("sweep");
    spec.template_json = templ.dump();
    return spec;
}

SweepSpec load_sweep_spec(const std::string& path) {
    return parse_sweep_spec(read_file(path));
}

NetworkSpec instantiate(const SweepSpec& spec, double value) {
    json j = parse_json(spec.template_json);
    replace_sweep_markers(j, value);
    return network_spec_from_json(j);
}

std::vector<double> sweep_grid(const SweepRange& range) {
    std::vector<double> grid;
    const int count = static_cast<int>(std::floor((range.hi - range.lo) / range.step + 1e-9)) + 1;
    grid.reserve(static_cast<std::size_t>(count));
    for (int k = 0; k < count; ++k)
        grid.push_back(range.lo + k * range.step);
    return grid;
}

// ---------------------------------------------------------------------------
// Analysis driver.

namespace {

std::vector<TwoQubitState> build_sources(const NetworkSpec& spec) {
    std::vector<TwoQubitState> sources;
    sources.reserve(spec.sources.size());
    for (std::size_t i = 0; i < spec.sources.size(); ++i) {
        try {
            sources.push_back(make_state(spec.sources[i]));
        } catch (const std::exception& e) {
            throw InputError("sources[" + std::to_string(i) + "]: " + e.what());
        }
    }
    return sources;
}

StateSpec dense_spec_of(const TwoQubitState& state) {
    return DenseSpec{state.rho};
}

} // namespace

AnalysisResult analyze(const NetworkSpec& spec, const AnalyzeOptions& options) {
    AnalysisResult result;
    result.spec = spec;
    if (options.convention_override)
        result.spec.convention = *options.convention_override;

    std::vector<TwoQubitState> sources = build_sources(result.spec);
    if (options.align) {
        const AlignTarget target =
            (spec.topology == Topology::star && sources.size() > 2) ? AlignTarget::star
                                                                    : AlignTarget::chain;
        for (std::size_t i = 0; i < sources.size(); ++i)
            sources[i] = align_state(sources[i], target).state;
        result.spec.sources.clear();
        for (const TwoQubitState& s : sources)
            result.spec.sources.push_back(dense_spec_of(s));
    }

    if (result.spec.topology == Topology::chain) {
        const ChainNetwork net(sources);
        result.report = chain_max(net, result.spec.convention);
        if (net.n() == 2)
            result.cs_pair = cauchy_schwarz_check(net.sources[0], net.sources[1]);
        else
            result.cs_chain = cauchy_schwarz_check(net);
        if (options.oracle) {
            const OptResult opt = optimize_chain(net, options.optimizer);
            // The optimizer works in the normalized scale; rescale to the
            // reported convention before comparing.
            const double scale = result.spec.convention == Convention::paper_scale ? 2.0 : 1.0;
            OracleOutcome oc;
            oc.value = scale * opt.value;
            oc.gap = result.report.closed_form_max - oc.value;
            oc.converged = opt.converged;
            oc.iterations = opt.iterations;
            oc.settings = opt.settings;
            result.oracle = std::move(oc);
        }
    } else {
        const StarNetwork net(sources);
        result.report = star_max(net, result.spec.convention);
        if (options.oracle) {
            const OptResult opt = optimize_star(net, options.optimizer);
            const double scale = result.spec.convention == Convention::paper_scale ? 2.0 : 1.0;
            OracleOutcome oc;
            oc.value = scale * opt.value;
            oc.gap = result.report.closed_form_max - oc.value;
            oc.converged = opt.converged;
            oc.iterations = opt.iterations;
            oc.settings = opt.settings;
            result.oracle = std::move(oc);
        }
    }
    if (result.oracle)
        result.oracle_exceeds_closed_form = result.oracle->value >
                                            result.report.closed_form_max + 1e-6;
    return result;
}

namespace {

std::string format_axis(const Vec3& v) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "(% .6f, % .6f, % .6f)", v[0], v[1], v[2]);
    return buf;
}

void append_settings_text(std::ostringstream& out,
                          const std::variant<ChainSettings, StarSettings>& settings) {
    if (const auto* cs = std::get_if<ChainSettings>(&settings)) {
        out << "oracle settings: a0 " << format_axis(cs->a0.axis) << "  a1 "
            << format_axis(cs->a1.axis) << "\n";
        out << "                 c0 " << format_axis(cs->c0.axis) << "  c1 "
            << format_axis(cs->c1.axis) << "\n";
    } else {
        const auto& ss = std::get<StarSettings>(settings);
        out << "oracle settings: alpha =";
        for (double a : ss.alpha) {
            char buf[32];
            std::snprintf(buf, sizeof buf, " %.6f", a);
            out << buf;
        }
        out << "\n                 nhat " << format_axis(ss.nhat) << "  nprime "
            << format_axis(ss.nprime) << "\n";
    }
}

} // namespace

std::string render_text_report(const AnalysisResult& result) {
    std::ostringstream out;
    char buf[160];
    out << "topology: " << topology_name(result.spec.topology) << " ("
        << result.spec.sources.size() << " sources), convention: "
        << convention_name(result.spec.convention) << "\n";
    for (std::size_t i = 0; i < result.report.per_source_spectra.size(); ++i) {
        const auto& l = result.report.per_source_spectra[i].lambda;
        std::snprintf(buf, sizeof buf, "source %zu spectrum: %.8f %.8f %.8f", i + 1, l[0],
                      l[1], l[2]);
        out << buf << "\n";
    }
    std::snprintf(buf, sizeof buf, "classical bound: %.6f", result.report.classical_bound);
    out << buf << "\n";
    std::snprintf(buf, sizeof buf, "closed-form max: %.6f", result.report.closed_form_max);
    out << buf << "\n";
    out << "verdict: " << (result.report.violation ? "VIOLATION" : "no violation") << "\n";
    const auto cs = result.cs_pair ? result.cs_pair : result.cs_chain;
    if (cs) {
        std::snprintf(buf, sizeof buf, "cauchy-schwarz: lhs %.6f vs rhs %.6f (%s)", cs->lhs,
                      cs->rhs, cs->holds ? "holds" : "VIOLATED");
        out << buf << "\n";
    }
    if (result.oracle) {
        std::snprintf(buf, sizeof buf,
                      "oracle: value %.6f (gap %.3g), %s after %d cycles", result.oracle->value,
                      result.oracle->gap, result.oracle->converged ? "converged" : "NOT converged",
                      result.oracle->iterations);
        out << buf << "\n";
        append_settings_text(out, result.oracle->settings);
        if (result.oracle_exceeds_closed_form)
            out << "WARNING: oracle exceeds the closed form beyond tolerance\n";
    }
    return out.str();
}

namespace {

json settings_to_json(const std::variant<ChainSettings, StarSettings>& settings) {
    json j;
    if (const auto* cs = std::get_if<ChainSettings>(&settings)) {
        j["a0"] = cs->a0.axis;
        j["a1"] = cs->a1.axis;
        j["c0"] = cs->c0.axis;
        j["c1"] = cs->c1.axis;
    } else {
        const auto& ss = std::get<StarSettings>(settings);
        j["alpha"] = ss.alpha;
        j["nhat"] = ss.nhat;
        j["nprime"] = ss.nprime;
    }
    return j;
}

} // namespace

std::string render_json_report(const AnalysisResult& result) {
    json j;
    j["topology"] = topology_name(result.spec.topology);
    j["convention"] = convention_name(result.spec.convention);
    json sources = json::array();
    for (const StateSpec& s : result.spec.sources)
        sources.push_back(state_spec_to_json(s));
    j["sources"] = std::move(sources);

    json rep;
    rep["n"] = result.report.n;
    rep["classical_bound"] = result.report.classical_bound;
    rep["closed_form_max"] = result.report.closed_form_max;
    rep["violation"] = result.report.violation;
    json spectra = json::array();
    for (const CorrelationSpectrum& s : result.report.per_source_spectra)
        spectra.push_back(s.lambda);
    rep["per_source_spectra"] = std::move(spectra);
    j["report"] = std::move(rep);

    const auto cs = result.cs_pair ? result.cs_pair : result.cs_chain;
    if (cs) {
        json c;
        c["lhs"] = cs->lhs;
        c["rhs"] = cs->rhs;
        c["holds"] = cs->holds;
        j["cauchy_schwarz"] = std::move(c);
    }
    if (result.oracle) {
        json o;
        o["value"] = result.oracle->value;
        o["gap"] = result.oracle->gap;
        o["converged"] = result.oracle->converged;
        o["iterations"] = result.oracle->iterations;
        o["settings"] = settings_to_json(result.oracle->settings);
        o["exceeds_closed_form"] = result.oracle_exceeds_closed_form;
        j["oracle"] = std::move(o);
    }
    return j.dump(2) + "\n";
}

std::vector<SweepRow> run_sweep(const SweepSpec& spec, const AnalyzeOptions& options) {
    const std::vector<double> grid = sweep_grid(spec.range);
    std::vector<SweepRow> rows(grid.size());
    std::exception_ptr failure;
    // Grid points are independent; rows land in ascending order by index.
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t k = 0; k < static_cast<std::ptrdiff_t>(grid.size()); ++k) {
        try {
            const NetworkSpec net_spec = instantiate(spec, grid[static_cast<std::size_t>(k)]);
            const AnalysisResult res = analyze(net_spec, options);
            SweepRow row;
            row.param = grid[static_cast<std::size_t>(k)];
            row.closed_form = res.report.closed_form_max;
            row.bound = res.report.classical_bound;
            row.violation = res.report.violation;
            if (res.oracle)
                row.oracle = res.oracle->value;
            rows[static_cast<std::size_t>(k)] = row;
        } catch (...) {
#pragma omp critical
            if (!failure)
                failure = std::current_exception();
        }
    }
    if (failure)
        std::rethrow_exception(failure);
    return rows;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
    const bool with_oracle = !rows.empty() && rows.front().oracle.has_value();
    std::ostringstream out;
    out << "param,closed_form,bound,violation";
    if (with_oracle)
        out << ",oracle";
    out << "\n";
    for (const SweepRow& r : rows) {
        out << format_double(r.param) << ',' << format_double(r.closed_form) << ','
            << format_double(r.bound) << ',' << (r.violation ? 1 : 0);
        if (with_oracle)
            out << ',' << format_double(r.oracle.value_or(0.0));
        out << "\n";
    }
    return out.str();
}

} // namespace nlocal
