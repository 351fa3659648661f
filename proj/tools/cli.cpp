#include "io.hpp"

#include "cocycle/dominated.hpp"
#include "cocycle/error.hpp"
#include "cocycle/extension.hpp"
#include "cocycle/one_form.hpp"
#include "cocycle/path.hpp"
#include "cocycle/sewing.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <iostream>
#include <optional>

using namespace cocycle;
using io::Json;

namespace {

enum Exit { ok = 0, invalid = 2, certificate_failed = 3, overflow = 4 };

struct Options {
    std::string input;
    std::string path_json;
    std::string form;
    std::string form2;
    std::string function;
    std::string system = "nilpotent";
    std::string schedule = "omega";
    int depth = 0;
    int to_level = 0;
    int levels = 0;
    double p = 1.0;
    double theta = 0.0;
    double tol = 1e-10;
    double max_constant = 1e6;
    bool full = false;
};

int floor_p(double p) { return static_cast<int>(std::floor(p)); }

void require_p(const Options& o)
{
    if (!(o.p >= 1.0) || !std::isfinite(o.p))
        reject("--p must be a finite number >= 1");
}

int depth_of(const Options& o)
{
    int n = o.depth > 0 ? o.depth : std::max(1, floor_p(o.p));
    if (n > 8)
        reject("--depth above 8 is not supported");
    return n;
}

double theta_of(const Options& o)
{
    if (o.theta > 0.0)
        return o.theta;
    return (floor_p(o.p) + 1) / o.p;
}

PathPtr signature_input(const Options& o, int depth)
{
    if (o.input.empty())
        reject("missing input CSV");
    io::CsvPath csv = io::read_csv_file(o.input);
    return std::make_shared<const SampledGroupPath>(
        signature_piecewise_linear(kind_from_string(o.system), depth, csv.times, csv.points));
}

Json vec(const std::vector<double>& v) { return Json(v); }

Json header(const std::string& command, const HopfSystem& sys, std::size_t points)
{
    Json j;
    j["command"] = command;
    j["system"] = to_string(sys.kind());
    j["d"] = sys.d();
    j["depth"] = sys.n();
    j["points"] = points;
    return j;
}

LipFunction read_form(const std::string& file, int d)
{
    Json j = io::read_json_file(file);
    Polynomial q = io::polynomial_from_json(j, true);
    if (q.in_dim() != d)
        reject(file + ": form dimension " + std::to_string(q.in_dim()) + " does not match the path dimension " +
               std::to_string(d));
    LipFunction f = LipFunction::from_polynomial(q);
    if (j.contains("gamma")) {
        if (!j["gamma"].is_number())
            reject(file + ": gamma must be a number");
        f.gamma = j["gamma"].get<double>();
    }
    return f;
}

Json slow_report(const SlowVaryingReport& r)
{
    Json j;
    j["theta"] = r.theta;
    j["p"] = r.p;
    j["M"] = r.M;
    j["quotients"] = vec(r.quotients);
    j["norm"] = r.norm;
    j["finite"] = r.finite;
    j["worst"] = Json{{"s", r.worst_s}, {"t", r.worst_t}, {"k", r.worst_k}};
    j["probed_points"] = r.points;
    return j;
}

Json integrable_report(const IntegrableReport& r)
{
    Json j;
    j["theta"] = r.theta;
    j["M"] = r.M;
    j["constant"] = r.constant;
    j["finite"] = r.finite;
    j["worst"] = Json{{"s", r.worst_s}, {"u", r.worst_u}, {"t", r.worst_t}};
    j["probed_points"] = r.points;
    return j;
}

// Coupling named by a form file, or the level-one increment of the base path.
DominatedPath coupling(const std::string& form, const PathPtr& g, const Options& o)
{
    if (form.empty())
        return dominate(increment_form(g), theta_of(o));
    return dominate(rough_one_form({read_form(form, g->system().d())}, g, o.p), theta_of(o));
}

Json dominated_json(const std::string& command, const DominatedPath& d, const Options& o)
{
    const PathPtr& g = d.base();
    Json j = header(command, g->system(), g->size());
    j["p"] = o.p;
    j["theta"] = d.theta;
    j["dim"] = d.dim();
    j["final"] = vec(d.trace.back());
    if (o.full) {
        j["times"] = g->times();
        Json trace = Json::array();
        for (const auto& x : d.trace)
            trace.push_back(vec(x));
        j["trace"] = std::move(trace);
    }
    Control omega = Control::from_pvar(*g, o.p);
    Json cert = slow_report(certify(d, omega, o.p));
    cert["remainder"] = remainder_constant(d, omega);
    j["certificate"] = std::move(cert);
    return j;
}

Json run_signature(const Options& o)
{
    PathPtr g = signature_input(o, o.depth > 0 ? depth_of(o) : 2);
    Json j = header("signature", g->system(), g->size());
    j["value"] = io::tensor_to_json(g->values().back());
    if (o.full)
        j["path"] = io::path_to_json(*g);
    return j;
}

Json run_pvar(const Options& o)
{
    require_p(o);
    PathPtr g = signature_input(o, depth_of(o));
    double v = p_variation(*g, o.p);
    Json j = header("pvar", g->system(), g->size());
    j["p"] = o.p;
    j["variation"] = v;
    j["variation_power"] = std::pow(v, o.p);
    return j;
}

Json run_extend(const Options& o)
{
    require_p(o);
    PathPtr g;
    if (!o.path_json.empty()) {
        g = std::make_shared<const SampledGroupPath>(io::path_from_json(io::read_json_file(o.path_json)));
        for (std::size_t i = 0; i < g->size(); ++i)
            if (!grouplike_check(g->value(i), o.tol))
                reject(o.path_json + ": value " + std::to_string(i) + " is not grouplike");
    } else {
        g = signature_input(o, depth_of(o));
    }
    if (o.to_level < 1)
        reject("--to-level is required");
    Schedule sched = schedule_from_string(o.schedule);
    Extension ext = extend_to_level(g, o.to_level, o.p, sched, RaiseMode::lift);
    Json j = header("extend", ext.path->system(), ext.path->size());
    j["p"] = o.p;
    j["schedule"] = to_string(sched);
    j["from_level"] = g->level();
    j["ratio"] = ext.ratio;
    Json steps = Json::array();
    for (const auto& s : ext.steps)
        steps.push_back(Json{{"level", s.level}, {"theta", s.theta}, {"tracked_error", s.tracked_error}});
    j["steps"] = std::move(steps);
    j["value"] = io::tensor_to_json(ext.path->values().back());
    if (o.full)
        j["path"] = io::path_to_json(*ext.path);
    return j;
}

Json run_integrate(const Options& o)
{
    require_p(o);
    if (o.form.empty())
        reject("integrate needs --form");
    PathPtr g = signature_input(o, depth_of(o));
    std::vector<LipFunction> F{read_form(o.form, g->system().d())};
    const double theta = theta_of(o);
    KernelPtr beta = rough_one_form(F, g, o.p);
    Schedule sched = schedule_from_string(o.schedule);
    Control omega = Control::from_pvar(*g, o.p);
    SewingResult total = sew(beta, g, omega, theta, sched);
    GroupEnhancement y = rough_integrate(F, g, o.p, theta, o.levels);

    Json j = header("integrate", g->system(), g->size());
    j["p"] = o.p;
    j["theta"] = theta;
    j["schedule"] = to_string(sched);
    j["dim"] = beta->out_dim();
    j["levels"] = y.levels;
    std::vector<double> level1(total.total.coeffs().begin() + 1, total.total.coeffs().end());
    j["total"] = vec(level1);
    j["tracked_error"] = total.tracked_error;
    j["value"] = io::tensor_to_json(y.gamma->values().back());
    if (o.full) {
        j["times"] = g->times();
        Json trace = Json::array();
        for (const auto& x : y.parts.front().trace)
            trace.push_back(vec(x));
        j["trace"] = std::move(trace);
    }
    j["certificate"] = slow_report(slowly_varying_certificate(*beta, *g, omega, theta, o.p));
    return j;
}

Json run_binary(const Options& o, bool iterate)
{
    require_p(o);
    PathPtr g = signature_input(o, depth_of(o));
    DominatedPath d1 = coupling(o.form, g, o);
    DominatedPath d2 = coupling(o.form2.empty() ? o.form : o.form2, g, o);
    DominatedPath out = iterate ? iterated_integral(d1, d2) : product(d1, d2);
    return dominated_json(iterate ? "iterate" : "product", out, o);
}

Json run_compose(const Options& o)
{
    require_p(o);
    if (o.function.empty())
        reject("compose needs --function");
    PathPtr g = signature_input(o, depth_of(o));
    DominatedPath d = coupling(o.form, g, o);
    Json fj = io::read_json_file(o.function);
    Polynomial q = io::polynomial_from_json(fj, false);
    if (q.in_dim() != d.dim())
        reject(o.function + ": function input dimension does not match the coupled path");
    LipFunction f = LipFunction::from_polynomial(q);
    if (fj.contains("gamma"))
        f.gamma = fj["gamma"].get<double>();
    return dominated_json("compose", compose(d, f, o.p), o);
}

Json run_enhance(const Options& o)
{
    require_p(o);
    PathPtr g = signature_input(o, depth_of(o));
    DominatedPath d = coupling(o.form, g, o);
    GroupEnhancement enh = enhance(d, o.levels > 0 ? o.levels : std::max(1, floor_p(o.p)));
    double residual = 0.0;
    const auto& gamma = *enh.gamma;
    const std::size_t last = gamma.size() - 1;
    for (std::size_t s = 0; s <= last; ++s)
        residual = std::max(residual, max_abs_diff(mul(gamma.value(s), gamma.increment(s, last)), gamma.value(last)));
    Json j = header("enhance", g->system(), g->size());
    j["p"] = o.p;
    j["theta"] = d.theta;
    j["dim"] = d.dim();
    j["levels"] = enh.levels;
    j["value"] = io::tensor_to_json(gamma.values().back());
    j["multiplicativity_residual"] = residual;
    if (o.full)
        j["path"] = io::path_to_json(gamma);
    return j;
}

struct CertificateFailure {
    Json report;
};

Json run_certify(const Options& o)
{
    require_p(o);
    if (o.form.empty())
        reject("certify needs --form");
    PathPtr g = signature_input(o, depth_of(o));
    LipFunction f = read_form(o.form, g->system().d());
    const double theta = theta_of(o);
    Json j = header("certify", g->system(), g->size());
    j["p"] = o.p;
    j["theta"] = theta;
    j["max_constant"] = o.max_constant;
    KernelPtr beta;
    try {
        beta = rough_one_form({f}, g, o.p);
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::certificate)
            throw;
        j["passed"] = false;
        j["reason"] = e.what();
        throw CertificateFailure{j};
    }
    Control omega = Control::from_pvar(*g, o.p);
    SlowVaryingReport slow = slowly_varying_certificate(*beta, *g, omega, theta, o.p);
    IntegrableReport integ = integrable_condition_check(*beta, *g, omega, theta);
    bool passed = theta > 1.0 && slow.finite && integ.finite && slow.norm <= o.max_constant &&
                  integ.constant <= o.max_constant;
    j["passed"] = passed;
    j["slowly_varying"] = slow_report(slow);
    j["integrable"] = integrable_report(integ);
    if (!passed)
        throw CertificateFailure{j};
    return j;
}

Json error_json(const std::string& kind, const std::string& message)
{
    Json j;
    j["error"] = kind;
    j["message"] = message;
    return j;
}

std::string kind_name(ErrorKind k)
{
    switch (k) {
    case ErrorKind::invalid_input:
        return "invalid_input";
    case ErrorKind::unsupported:
        return "unsupported";
    case ErrorKind::certificate:
        return "certificate";
    case ErrorKind::overflow:
        return "overflow";
    }
    return "invalid_input";
}

int exit_code(ErrorKind k)
{
    switch (k) {
    case ErrorKind::certificate:
        return certificate_failed;
    case ErrorKind::overflow:
        return overflow;
    default:
        return invalid;
    }
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Integration of cocyclic one-forms against sampled group-valued paths"};
    app.require_subcommand(1);
    Options o;

    auto common = [&](CLI::App* sub, bool csv) {
        if (csv)
            sub->add_option("input", o.input, "CSV path with header t,x1,...,xd");
        sub->add_option("--system", o.system, "nilpotent or butcher")
            ->check(CLI::IsMember({"nilpotent", "butcher"}));
        sub->add_option("--depth", o.depth, "truncation level of the input signature");
        sub->add_option("--tol", o.tol, "relative tolerance for group checks");
        sub->add_flag("--full", o.full, "emit the whole path or trace");
    };
    auto rough = [&](CLI::App* sub) {
        sub->add_option("--p", o.p, "p-variation exponent")->required();
        sub->add_option("--theta", o.theta, "sewing exponent, default ([p]+1)/p");
        sub->add_option("--schedule", o.schedule, "omega, dyadic or ltr")
            ->check(CLI::IsMember({"omega", "dyadic", "ltr", "omega_guided", "left_to_right"}));
    };

    std::vector<std::pair<CLI::App*, std::function<Json()>>> commands;

    auto* sig = app.add_subcommand("signature", "signature of a piecewise-linear path");
    common(sig, true);
    commands.emplace_back(sig, [&] { return run_signature(o); });

    auto* pv = app.add_subcommand("pvar", "p-variation of the signature path");
    common(pv, true);
    pv->add_option("--p", o.p, "p-variation exponent")->required();
    commands.emplace_back(pv, [&] { return run_pvar(o); });

    auto* ext = app.add_subcommand("extend", "raise a path to a higher truncation level");
    common(ext, true);
    rough(ext);
    ext->add_option("--to-level", o.to_level, "target level")->required();
    ext->add_option("--path-json", o.path_json, "path JSON input instead of a CSV");
    commands.emplace_back(ext, [&] { return run_extend(o); });

    auto* integ = app.add_subcommand("integrate", "rough integral of a polynomial one-form");
    common(integ, true);
    rough(integ);
    integ->add_option("--form", o.form, "one-form JSON")->required();
    integ->add_option("--levels", o.levels, "levels of the enhanced integral, default [p]");
    commands.emplace_back(integ, [&] { return run_integrate(o); });

    auto* iter = app.add_subcommand("iterate", "iterated integral of two dominated paths");
    common(iter, true);
    rough(iter);
    iter->add_option("--form", o.form, "first coupling; default is the path increment");
    iter->add_option("--form2", o.form2, "second coupling; default is the first");
    commands.emplace_back(iter, [&] { return run_binary(o, true); });

    auto* prod = app.add_subcommand("product", "pointwise tensor product of two dominated paths");
    common(prod, true);
    rough(prod);
    prod->add_option("--form", o.form, "first coupling; default is the path increment");
    prod->add_option("--form2", o.form2, "second coupling; default is the first");
    commands.emplace_back(prod, [&] { return run_binary(o, false); });

    auto* comp = app.add_subcommand("compose", "f applied to a dominated path");
    common(comp, true);
    rough(comp);
    comp->add_option("--form", o.form, "coupling; default is the path increment");
    comp->add_option("--function", o.function, "polynomial JSON for f")->required();
    commands.emplace_back(comp, [&] { return run_compose(o); });

    auto* enh = app.add_subcommand("enhance", "group enhancement of a dominated path");
    common(enh, true);
    rough(enh);
    enh->add_option("--form", o.form, "coupling; default is the path increment");
    enh->add_option("--levels", o.levels, "levels, default [p]");
    commands.emplace_back(enh, [&] { return run_enhance(o); });

    auto* cert = app.add_subcommand("certify", "slowly-varying and integrable certificates of a one-form");
    common(cert, true);
    rough(cert);
    cert->add_option("--form", o.form, "one-form JSON")->required();
    cert->add_option("--max-constant", o.max_constant, "largest accepted certificate constant");
    commands.emplace_back(cert, [&] { return run_certify(o); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << io::dump(error_json("invalid_input", e.what()));
        return invalid;
    }

    try {
        for (auto& [sub, run] : commands) {
            if (!sub->parsed())
                continue;
            std::string out = io::dump(run());
            std::cout << out;
            return ok;
        }
    } catch (const CertificateFailure& f) {
        std::cerr << io::dump(f.report);
        return certificate_failed;
    } catch (const Error& e) {
        std::cerr << io::dump(error_json(kind_name(e.kind()), e.what()));
        return exit_code(e.kind());
    } catch (const std::exception& e) {
        std::cerr << io::dump(error_json("invalid_input", e.what()));
        return invalid;
    }
    return invalid;
}
