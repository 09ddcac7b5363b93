// SPDX-License-Identifier: Apache-2.0
// wchaos: batch runner for the chaos diagnostics, the fBm and sheet sweeps,
// raw sampling, and the validation suite.

#include "criteria.hpp"

#include "wchaos/diagnostics.hpp"
#include "wchaos/errors.hpp"
#include "wchaos/experiments.hpp"
#include "wchaos/functionals.hpp"
#include "wchaos/parallel.hpp"

#include <CLI11.hpp>
#include <Eigen/Core>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

namespace {

using nlohmann::ordered_json;
using namespace wchaos;

constexpr const char* kVersion = "0.1.0";

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Config {
    std::string command;
    std::uint64_t seed = 42;
    std::size_t samples = 10000;
    int grid = 256;
    double ratio = 0.5;
    std::vector<double> hurst{0.75};
    std::vector<double> beta;
    std::vector<double> eps;
    std::vector<double> schedule;
    int dims = 1;
    std::string family;
    std::string method = "spectral";
    std::string out = ".";
    int threads = 0;
    std::string configFile;
};

std::string fmt(double v)
{
    if (std::isnan(v)) {
        return "nan";
    }
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

/// Column list with descriptions, written to the schema sidecar.
struct Table {
    std::vector<std::pair<std::string, std::string>> columns;
    std::vector<std::vector<std::string>> rows;
};

void writeFile(const std::filesystem::path& p, const std::string& content)
{
    std::ofstream os(p, std::ios::binary);
    if (!os) {
        throw IoError("cannot write " + p.string());
    }
    os << content;
    if (!os) {
        throw IoError("write failed for " + p.string());
    }
}

void writeTable(const std::filesystem::path& dir, const std::string& stem, const Table& t)
{
    std::string csv;
    for (std::size_t i = 0; i < t.columns.size(); ++i) {
        csv += (i ? "," : "") + t.columns[i].first;
    }
    csv += '\n';
    for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            csv += (i ? "," : "") + row[i];
        }
        csv += '\n';
    }
    writeFile(dir / (stem + ".csv"), csv);

    ordered_json schema;
    schema["file"] = stem + ".csv";
    schema["delimiter"] = ",";
    schema["header"] = true;
    ordered_json cols = ordered_json::array();
    for (const auto& [name, desc] : t.columns) {
        cols.push_back({{"name", name}, {"description", desc}});
    }
    schema["columns"] = cols;
    writeFile(dir / (stem + ".schema.json"), schema.dump(2) + "\n");
}

ordered_json configEcho(const Config& c)
{
    return {{"command", c.command}, {"seed", c.seed},     {"samples", c.samples}, {"grid", c.grid},
            {"ratio", c.ratio},     {"hurst", c.hurst},   {"beta", c.beta},       {"eps", c.eps},
            {"schedule", c.schedule}, {"dims", c.dims},   {"family", c.family},   {"method", c.method}};
}

void writeSummary(const std::filesystem::path& dir, const Config& c, ordered_json results, double wallSeconds)
{
    ordered_json s;
    s["config"] = configEcho(c);
    s["versions"] = {{"wchaos", kVersion},
                     {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) +
                                   "." + std::to_string(EIGEN_MINOR_VERSION)},
                     {"compiler", __VERSION__}};
    s["results"] = std::move(results);
    writeFile(dir / "summary.json", s.dump(2) + "\n");
    writeFile(dir / "timing.json", ordered_json{{"command", c.command}, {"wall_seconds", wallSeconds}}.dump(2) + "\n");
}

void addSummaryColumns(Table& t)
{
    const std::pair<std::string, std::string> cols[] = {
        {"mc_mean", "sample mean of the normalized statistic"},
        {"mc_mean_se", "jackknife standard error of mc_mean"},
        {"mc_variance", "sample variance"},
        {"mc_variance_se", "jackknife standard error of mc_variance"},
        {"mc_skewness", "sample skewness"},
        {"mc_kurtosis", "sample kurtosis (3 for a Gaussian)"},
        {"mc_kurtosis_se", "jackknife standard error of mc_kurtosis"},
        {"ks_statistic", "Kolmogorov-Smirnov distance to N(0,1) of the standardized draws"},
        {"ks_threshold", "5% critical value 1.358/sqrt(N)"},
        {"ks_pass", "1 if ks_statistic <= ks_threshold"},
    };
    for (const auto& c : cols) {
        t.columns.push_back(c);
    }
}

void appendSummary(std::vector<std::string>& row, const SampleSummary& s, const KSResult& ks)
{
    for (double v : {s.mean, s.meanSE, s.variance, s.varianceSE, s.skewness, s.kurtosis, s.kurtosisSE,
                     ks.statistic, ks.threshold}) {
        row.push_back(fmt(v));
    }
    row.push_back(ks.pass ? "1" : "0");
}

ordered_json runSweep(const Config& c, const std::vector<FunctionalParams>& points, const std::string& stem)
{
    Table t;
    t.columns = {{"family", "functional family"},
                 {"hurst", "Hurst parameter (fBm families)"},
                 {"dims", "sheet dimension (sheet families)"},
                 {"beta", "exponent beta (first axis for sheets)"},
                 {"eps", "cutoff eps (eps families)"},
                 {"control", "2beta+2H+1 (F_beta), prod(2beta_i+2) (A_beta), or eps"},
                 {"cells", "grid cells per axis"},
                 {"generators", "embedding dimension"},
                 {"exact_variance", "variance of the embedded normalized statistic"},
                 {"exact_excess", "exact excess kurtosis of the embedded statistic"},
                 {"contraction_ratio", "||f (x)_1 f||^2 / ||f||^4"},
                 {"closed_form_variance", "closed-form limit-statistic variance (sheets; nan otherwise)"}};
    addSummaryColumns(t);

    ordered_json rows = ordered_json::array();
    for (std::size_t j = 0; j < points.size(); ++j) {
        const FunctionalParams& p = points[j];
        const SweepRow r = runSweepPoint(p, defaultGrid(p, c.grid, c.ratio), c.samples, c.seed,
                                         stem + "/" + std::to_string(j), parseMethod(c.method));
        std::vector<std::string> row = {familyName(p.family),
                                        p.isSheet() ? "nan" : fmt(p.hurst),
                                        std::to_string(p.isSheet() ? p.sheetDims : 1),
                                        p.beta.empty() ? "nan" : fmt(p.beta[0]),
                                        p.eps > 0.0 ? fmt(p.eps) : "nan",
                                        fmt(r.control),
                                        std::to_string(r.cells),
                                        std::to_string(r.generators),
                                        fmt(r.exactVariance),
                                        fmt(r.exactExcess),
                                        fmt(r.contractionRatio),
                                        fmt(r.closedFormVariance)};
        appendSummary(row, r.mc, r.ks);
        t.rows.push_back(row);
        ordered_json jr = {{"family", familyName(p.family)},
                           {"control", r.control},
                           {"exact_variance", r.exactVariance},
                           {"exact_excess", r.exactExcess},
                           {"mc_variance", r.mc.variance},
                           {"mc_variance_se", r.mc.varianceSE},
                           {"mc_excess_kurtosis", r.mc.excessKurtosis()},
                           {"mc_kurtosis_se", r.mc.kurtosisSE},
                           {"ks_pass", r.ks.pass}};
        if (!std::isnan(r.closedFormVariance)) {
            jr["closed_form_variance"] = r.closedFormVariance;
        }
        rows.push_back(jr);
        std::cout << familyName(p.family) << " control=" << fmt(r.control) << " var=" << r.mc.variance
                  << " excess=" << r.mc.excessKurtosis() << " (exact " << r.exactExcess << ")\n";
    }
    writeTable(c.out, stem, t);
    return {{"rows", rows}};
}

std::vector<FunctionalParams> fbmPoints(const Config& c)
{
    const bool epsOnly = !c.eps.empty() && c.schedule.empty() && c.beta.empty();
    const Family fam = !c.family.empty() ? parseFamily(c.family) : epsOnly ? Family::LEps : Family::FBeta;
    std::vector<FunctionalParams> pts;
    for (double h : c.hurst) {
        if (fam == Family::FBeta) {
            for (double d : c.schedule) {
                pts.push_back(fBetaFromDelta(h, d));
            }
            for (double b : c.beta) {
                pts.push_back(FunctionalParams::fBeta(h, b));
            }
        } else if (fam == Family::LEps) {
            for (double e : c.eps) {
                pts.push_back(FunctionalParams::lEps(h, e));
            }
        } else {
            throw UsageError("sweep-fbm takes --family F_beta or L_eps");
        }
    }
    if (pts.empty()) {
        throw UsageError("sweep-fbm: give --schedule/--beta (F_beta) or --eps (L_eps)");
    }
    return pts;
}

std::vector<FunctionalParams> sheetPoints(const Config& c)
{
    const bool epsOnly = !c.eps.empty() && c.schedule.empty() && c.beta.empty();
    const Family fam = !c.family.empty() ? parseFamily(c.family) : epsOnly ? Family::BEps : Family::ABeta;
    std::vector<FunctionalParams> pts;
    if (fam == Family::ABeta) {
        for (double s : c.schedule) {
            pts.push_back(aBetaFromControl(c.dims, s));
        }
        for (double b : c.beta) {
            pts.push_back(FunctionalParams::aBeta(std::vector<double>(static_cast<std::size_t>(c.dims), b)));
        }
    } else if (fam == Family::BEps) {
        for (double e : c.eps) {
            pts.push_back(FunctionalParams::bEps(c.dims, e));
        }
    } else {
        throw UsageError("sweep-sheet takes --family A_beta or B_eps");
    }
    if (pts.empty()) {
        throw UsageError("sweep-sheet: give --schedule/--beta (A_beta) or --eps (B_eps)");
    }
    return pts;
}

ordered_json runDiagnose(const Config& c)
{
    const std::string fam = c.family.empty() ? "clt" : c.family;
    std::vector<double> sched = c.schedule;
    if (sched.empty()) {
        sched = fam == "clt" ? std::vector<double>{4, 16, 64, 256} : std::vector<double>{1, 2, 3, 4};
    }
    const DiagnosticReport rep = theoremOneReport(builtinSequence(fam, sched), c.samples, c.seed);
    Table t;
    t.columns = {{"parameter", "schedule value k"},
                 {"dim", "ambient dimension"},
                 {"raw_variance", "n! ||f_k||^2 before rescaling to unit variance"},
                 {"fourth_moment", "exact E[I_n(f)^4] at unit variance"},
                 {"excess", "fourth_moment - 3"}};
    for (int p = 1; p < rep.order; ++p) {
        t.columns.push_back({"contraction_p" + std::to_string(p), "||f (x)_p f||^2 at unit variance"});
    }
    addSummaryColumns(t);
    ordered_json rows = ordered_json::array();
    for (const auto& r : rep.rows) {
        std::vector<std::string> row = {fmt(r.parameter), std::to_string(r.dim), fmt(r.rawVariance),
                                        fmt(r.fourthMoment), fmt(r.excess)};
        for (double v : r.contractionNorms) {
            row.push_back(fmt(v));
        }
        appendSummary(row, r.mc, r.ks);
        t.rows.push_back(row);
        rows.push_back({{"parameter", r.parameter},
                        {"excess", r.excess},
                        {"contraction_norms", r.contractionNorms},
                        {"mc_kurtosis", r.mc.kurtosis},
                        {"ks_pass", r.ks.pass}});
        std::cout << "k=" << r.parameter << " excess=" << r.excess << " mc_kurtosis=" << r.mc.kurtosis
                  << " KS " << (r.ks.pass ? "pass" : "fail") << "\n";
    }
    writeTable(c.out, "diagnose", t);
    std::cout << "verdict: " << verdictName(rep.verdict) << " (" << rep.reason << ")\n";
    return {{"family", fam}, {"verdict", verdictName(rep.verdict)}, {"reason", rep.reason}, {"rows", rows}};
}

ordered_json runSample(const Config& c)
{
    const bool epsOnly = !c.eps.empty() && c.schedule.empty() && c.beta.empty();
    const Family fam = !c.family.empty() ? parseFamily(c.family) : epsOnly ? Family::LEps : Family::FBeta;
    FunctionalParams p;
    const double h = c.hurst.front();
    switch (fam) {
    case Family::FBeta:
        p = !c.beta.empty() ? FunctionalParams::fBeta(h, c.beta.front())
                            : fBetaFromDelta(h, c.schedule.empty() ? 0.1 : c.schedule.front());
        break;
    case Family::LEps: p = FunctionalParams::lEps(h, c.eps.empty() ? 0.01 : c.eps.front()); break;
    case Family::ABeta:
        p = !c.beta.empty()
                ? FunctionalParams::aBeta(std::vector<double>(static_cast<std::size_t>(c.dims), c.beta.front()))
                : aBetaFromControl(c.dims, c.schedule.empty() ? 0.1 : c.schedule.front());
        break;
    case Family::BEps: p = FunctionalParams::bEps(c.dims, c.eps.empty() ? 0.01 : c.eps.front()); break;
    }
    const GridEmbedding emb = buildEmbedding(processModel(p), defaultGrid(p, c.grid, c.ratio));
    const StatisticOperator op(p, emb);
    const HSOperator spec = statisticSpectrum(op);
    const auto draws = sampleNormalizedStatistic(op, spec, c.samples, c.seed, "sample", parseMethod(c.method));
    Table t;
    t.columns = {{"index", "draw index (RNG stream)"}, {"value", "normalized statistic"}};
    for (std::size_t i = 0; i < draws.size(); ++i) {
        t.rows.push_back({std::to_string(i), fmt(draws[i])});
    }
    writeTable(c.out, "samples", t);
    ordered_json res = {{"family", familyName(p.family)}, {"count", draws.size()}};
    if (draws.size() >= 3) {
        const SampleSummary s = summarize(draws);
        res["mean"] = s.mean;
        res["variance"] = s.variance;
        res["kurtosis"] = s.kurtosis;
    }
    return res;
}

ordered_json runValidate(const Config& c, bool& allPass)
{
    allPass = true;
    const auto results = validation::runValidation(c.seed, c.threads < 1 ? 1 : c.threads,
                                                   [&](const validation::CriterionResult& r) {
                                                       std::cout << validation::formatLine(r) << std::endl;
                                                       allPass = allPass && r.pass;
                                                   });
    writeFile(std::filesystem::path(c.out) / "validation.csv", validation::resultsCsv(results));
    writeFile(std::filesystem::path(c.out) / "validation.json", validation::resultsJson(results, c.seed).dump(2) + "\n");
    ordered_json j = ordered_json::array();
    for (const auto& r : results) {
        j.push_back({{"id", r.id}, {"pass", r.pass}});
    }
    return j;
}

/// Flat key=value file; '#' starts a comment. Returns "--key value" pairs
/// for keys the command line does not set itself.
std::vector<std::string> configArgs(const std::string& path, const std::vector<std::string>& given)
{
    std::ifstream is(path);
    if (!is) {
        throw UsageError("cannot read config file " + path);
    }
    std::vector<std::string> out;
    std::string line;
    int lineNo = 0;
    while (std::getline(is, line)) {
        ++lineNo;
        if (const auto hash = line.find('#'); hash != std::string::npos) {
            line.erase(hash);
        }
        const auto trim = [](std::string s) {
            const auto b = s.find_first_not_of(" \t\r");
            const auto e = s.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw UsageError("config line " + std::to_string(lineNo) + ": expected key=value");
        }
        const std::string key = "--" + trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        bool overridden = false;
        for (const auto& g : given) {
            overridden = overridden || g == key || g.rfind(key + "=", 0) == 0;
        }
        if (!overridden) {
            out.push_back(key);
            std::stringstream ss(value);
            std::string item;
            while (std::getline(ss, item, ',')) {
                out.push_back(trim(item));
            }
        }
    }
    return out;
}

void addCommon(CLI::App* sub, Config& c)
{
    sub->add_option("--seed", c.seed, "RNG seed");
    sub->add_option("--samples", c.samples, "Monte Carlo draws per point")->check(CLI::PositiveNumber);
    sub->add_option("--grid", c.grid, "grid cells per axis")->check(CLI::Range(1, 1 << 16));
    sub->add_option("--ratio", c.ratio, "cell ratio of the geometric grid (F_beta, A_beta)");
    sub->add_option("--hurst", c.hurst, "Hurst parameter(s)")->delimiter(',');
    sub->add_option("--beta", c.beta, "beta value(s)")->delimiter(',');
    sub->add_option("--eps", c.eps, "eps value(s)")->delimiter(',');
    sub->add_option("--schedule", c.schedule,
                    "schedule: 2beta+2H+1 (F_beta), 2beta+2 (A_beta), or k (diagnose)")
        ->delimiter(',');
    sub->add_option("--dims", c.dims, "sheet dimension")->check(CLI::Range(1, 4));
    sub->add_option("--family", c.family, "family name");
    sub->add_option("--method", c.method, "sampling method: spectral or quadratic");
    sub->add_option("--out", c.out, "output directory");
    sub->add_option("--threads", c.threads, "worker threads (0 = all cores)");
    sub->add_option("--config", c.configFile, "flat key=value config file");
}

void fail(const std::string& kind, const std::string& reason)
{
    std::string oneLine = reason;
    for (char& ch : oneLine) {
        if (ch == '\n') {
            ch = ' ';
        }
    }
    std::cerr << "wchaos: error=" << kind << " reason=\"" << oneLine << "\"" << std::endl;
}

}  // namespace

int main(int argc, char** argv)
{
    std::vector<std::string> args(argv + 1, argv + argc);
    // splice in config-file values that the command line does not override
    for (std::size_t i = 0; i + 1 < args.size(); ++i) {
        if (args[i] == "--config" || args[i].rfind("--config=", 0) == 0) {
            const std::string path = args[i] == "--config" ? args[i + 1] : args[i].substr(9);
            try {
                const auto extra = configArgs(path, args);
                args.insert(args.end(), extra.begin(), extra.end());
            } catch (const std::exception& e) {
                fail("usage", e.what());
                return 1;
            }
            break;
        }
    }

    Config c;
    CLI::App app{"Wiener chaos diagnostics and limit-theorem experiments", "wchaos"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);
    const char* commands[][2] = {{"diagnose", "fourth-moment diagnostics for a built-in kernel sequence"},
                                 {"sweep-fbm", "normalized F_beta / L_eps statistics along a schedule"},
                                 {"sweep-sheet", "normalized A_beta / B_eps statistics along a schedule"},
                                 {"validate", "run the acceptance suite"},
                                 {"sample", "raw draws of a normalized statistic"}};
    for (const auto& [name, desc] : commands) {
        addCommon(app.add_subcommand(name, desc), c);
    }

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        fail("usage", e.what());
        return 1;
    }
    c.command = app.get_subcommands().front()->get_name();

    try {
        if (c.threads > 0) {
            setThreadCount(c.threads);
        }
        std::filesystem::create_directories(c.out);
        if (!std::filesystem::is_directory(c.out)) {
            throw IoError("output path is not a directory: " + c.out);
        }
        parseMethod(c.method);
        const auto start = std::chrono::steady_clock::now();
        ordered_json results;
        int status = 0;
        if (c.command == "diagnose") {
            results = runDiagnose(c);
        } else if (c.command == "sweep-fbm") {
            const auto pts = fbmPoints(c);
            results = runSweep(c, pts, "sweep_fbm");
        } else if (c.command == "sweep-sheet") {
            const auto pts = sheetPoints(c);
            results = runSweep(c, pts, "sweep_sheet");
        } else if (c.command == "validate") {
            bool all = true;
            results = runValidate(c, all);
            status = all ? 0 : 2;
        } else {
            results = runSample(c);
        }
        const double wall =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        writeSummary(c.out, c, std::move(results), wall);
        return status;
    } catch (const UsageError& e) {
        fail("usage", e.what());
        return 1;
    } catch (const std::invalid_argument& e) {
        fail("invalid-argument", e.what());
        return 1;
    } catch (const IoError& e) {
        fail("io", e.what());
        return 1;
    } catch (const std::filesystem::filesystem_error& e) {
        fail("io", e.what());
        return 1;
    } catch (const NumericalError& e) {
        fail("numerical", e.what());
        return 2;
    } catch (const std::exception& e) {
        fail("numerical", e.what());
        return 2;
    }
}
