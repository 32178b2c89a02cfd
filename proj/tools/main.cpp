#include <CLI11.hpp>

#include <functional>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include "commands.hpp"
#include "config.hpp"
#include "plasmonqd/errors.hpp"

using namespace plasmonqd;
using namespace plasmonqd::cli;

namespace {

// Options are collected as text and applied on top of the config file afterwards,
// so a flag always wins over the file and numbers may be written as "pi/4".
class Overrides {
public:
    void number(CLI::App* app, const std::string& flag, const std::string& help, std::function<void(RunConfig&, double)> set) {
        auto v = std::make_shared<std::string>();
        auto* opt = app->add_option(flag, *v, help);
        items_.push_back([=](RunConfig& c) {
            if (opt->count()) set(c, parse_number(*v));
        });
    }
    void count(CLI::App* app, const std::string& flag, const std::string& help, std::function<void(RunConfig&, std::size_t)> set) {
        auto v = std::make_shared<std::size_t>();
        auto* opt = app->add_option(flag, *v, help);
        items_.push_back([=](RunConfig& c) {
            if (opt->count()) set(c, *v);
        });
    }
    void list(CLI::App* app, const std::string& flag, const std::string& help,
              std::function<void(RunConfig&, std::vector<double>)> set) {
        auto v = std::make_shared<std::vector<std::string>>();
        auto* opt = app->add_option(flag, *v, help)->delimiter(',');
        items_.push_back([=](RunConfig& c) {
            if (!opt->count()) return;
            std::vector<double> xs;
            for (const auto& s : *v) xs.push_back(parse_number(s));
            set(c, xs);
        });
    }
    void flag(CLI::App* app, const std::string& flag, const std::string& help, std::function<void(RunConfig&)> set) {
        auto* opt = app->add_flag(flag, help);
        items_.push_back([=](RunConfig& c) {
            if (opt->count()) set(c);
        });
    }
    void apply(RunConfig& c) const {
        for (const auto& f : items_) f(c);
    }

private:
    std::vector<std::function<void(RunConfig&)>> items_;
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Single-plasmon scattering, entanglement and storage with two quantum dots"};
    app.set_version_flag("--version", PLASMONQD_VERSION);
    app.require_subcommand(0, 1);

    std::string config_path, out_dir, format;
    unsigned threads = 0;
    std::uint64_t seed = 0;
    auto* o_config = app.add_option("--config", config_path, "INI config file")->check(CLI::ExistingFile);
    auto* o_out = app.add_option("--out", out_dir, "output directory");
    auto* o_format = app.add_option("--format", format, "csv or json");
    auto* o_threads = app.add_option("--threads", threads, "worker threads, 0 = all cores");
    auto* o_seed = app.add_option("--seed", seed, "seed for sampled checks");

    Overrides ov;

    auto* sp = app.add_subcommand("spectrum", "T, R and Loss against detuning");
    auto custom = [](RunConfig& c) { c.spectrum.preset = false; };
    ov.list(sp, "--kd", "inter-dot phases", [=](RunConfig& c, std::vector<double> v) { custom(c); c.spectrum.kd = v; });
    ov.list(sp, "--gamma0", "radiative loss rates", [=](RunConfig& c, std::vector<double> v) { custom(c); c.spectrum.gamma0 = v; });
    ov.list(sp, "--gamma-nr", "non-radiative loss rates", [=](RunConfig& c, std::vector<double> v) { custom(c); c.spectrum.gamma_nr = v; });
    ov.list(sp, "--gamma-prime", "total loss for the single dot", [=](RunConfig& c, std::vector<double> v) { custom(c); c.spectrum.gamma_prime = v; });
    ov.flag(sp, "--single-dot", "one emitter", [=](RunConfig& c) { custom(c); c.spectrum.single_dot = true; });
    ov.flag(sp, "--sr", "include the super-radiant exchange", [](RunConfig& c) { c.spectrum.superradiance = true; });
    ov.number(sp, "--k0d", "free-space phase for SR (default kd)", [](RunConfig& c, double v) { c.spectrum.k0d = v; });
    ov.number(sp, "--delta-min", "", [](RunConfig& c, double v) { c.spectrum.delta_min = v; });
    ov.number(sp, "--delta-max", "", [](RunConfig& c, double v) { c.spectrum.delta_max = v; });
    ov.count(sp, "--points", "", [](RunConfig& c, std::size_t v) { c.spectrum.points = v; });

    auto* pk = app.add_subcommand("peaks", "reflection peak position against kd, with and without SR");
    ov.number(pk, "--kd-min", "", [](RunConfig& c, double v) { c.peaks.kd_min = v; });
    ov.number(pk, "--kd-max", "", [](RunConfig& c, double v) { c.peaks.kd_max = v; });
    ov.count(pk, "--kd-points", "", [](RunConfig& c, std::size_t v) { c.peaks.kd_points = v; });
    ov.number(pk, "--gamma0", "", [](RunConfig& c, double v) { c.peaks.gamma0 = v; });
    ov.number(pk, "--gamma-nr", "", [](RunConfig& c, double v) { c.peaks.gamma_nr = v; });
    ov.number(pk, "--k0d", "fixed free-space phase for the SR series (default kd)", [](RunConfig& c, double v) { c.peaks.k0d = v; });
    ov.number(pk, "--delta-min", "", [](RunConfig& c, double v) { c.peaks.delta_min = v; });
    ov.number(pk, "--delta-max", "", [](RunConfig& c, double v) { c.peaks.delta_max = v; });

    auto* cm = app.add_subcommand("concurrence-map", "concurrence of the post-selected state over (kd, delta)");
    ov.number(cm, "--kd-min", "", [](RunConfig& c, double v) { c.map.kd_min = v; });
    ov.number(cm, "--kd-max", "", [](RunConfig& c, double v) { c.map.kd_max = v; });
    ov.count(cm, "--kd-points", "", [](RunConfig& c, std::size_t v) { c.map.kd_points = v; });
    ov.number(cm, "--delta-min", "", [](RunConfig& c, double v) { c.map.delta_min = v; });
    ov.number(cm, "--delta-max", "", [](RunConfig& c, double v) { c.map.delta_max = v; });
    ov.count(cm, "--delta-points", "", [](RunConfig& c, std::size_t v) { c.map.delta_points = v; });
    ov.number(cm, "--gamma0", "", [](RunConfig& c, double v) { c.map.gamma0 = v; });
    ov.number(cm, "--gamma-nr", "", [](RunConfig& c, double v) { c.map.gamma_nr = v; });
    ov.flag(cm, "--sr", "", [](RunConfig& c) { c.map.superradiance = true; });
    ov.number(cm, "--k0d", "", [](RunConfig& c, double v) { c.map.k0d = v; });

    auto* ph = app.add_subcommand("phase", "relative phase along the high-concurrence branch");
    ov.number(ph, "--delta-min", "", [](RunConfig& c, double v) { c.phase.delta_min = v; });
    ov.number(ph, "--delta-max", "", [](RunConfig& c, double v) { c.phase.delta_max = v; });
    ov.count(ph, "--delta-points", "", [](RunConfig& c, std::size_t v) { c.phase.delta_points = v; });
    ov.list(ph, "--gamma-prime", "", [](RunConfig& c, std::vector<double> v) { c.phase.gamma_prime = v; });
    ov.number(ph, "--kd-centre", "branch centre, a multiple of pi", [](RunConfig& c, double v) { c.phase.kd_centre = v; });

    auto* orc = app.add_subcommand("oracle-verify", "time-domain wavepacket check of the stationary solver");
    ov.list(orc, "--kd", "", [](RunConfig& c, std::vector<double> v) { c.oracle.kd = v; });
    ov.list(orc, "--delta", "", [](RunConfig& c, std::vector<double> v) { c.oracle.delta = v; });
    ov.list(orc, "--loss", "gamma0 = Gamma0 values", [](RunConfig& c, std::vector<double> v) { c.oracle.loss = v; });
    ov.count(orc, "--extra-points", "random extra points from --seed", [](RunConfig& c, std::size_t v) { c.oracle.extra_points = v; });
    ov.number(orc, "--sigma-k", "", [](RunConfig& c, double v) { c.oracle.sigma_k = v; });
    ov.number(orc, "--tolerance", "", [](RunConfig& c, double v) { c.oracle.tolerance = v; });
    ov.flag(orc, "--coarse", "under-resolved mode grid (expected to be refused)", [](RunConfig& c) { c.oracle.coarse = true; });

    auto* st = app.add_subcommand("storage", "matched-pulse storage efficiency against P");
    ov.list(st, "--P", "Purcell factors", [](RunConfig& c, std::vector<double> v) { c.storage.P = v; });
    ov.number(st, "--sigma", "input bandwidth", [](RunConfig& c, double v) { c.storage.sigma = v; });
    ov.flag(st, "--no-odd-twin", "skip the odd-parity runs", [](RunConfig& c) { c.storage.odd_twin = false; });
    ov.flag(st, "--dump", "write pulse and trajectory files", [](RunConfig& c) { c.storage.dump = true; });

    for (auto* sub : {sp, pk, cm, ph, orc, st}) sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return static_cast<int>(ErrorClass::config);
    }

    try {
        RunConfig cfg = o_config->count() ? load_config(config_path) : RunConfig{};
        if (auto subs = app.get_subcommands(); !subs.empty()) cfg.experiment = subs.front()->get_name();
        if (cfg.experiment.empty()) throw InvalidParams("no experiment: give a subcommand or [run] experiment");
        if (o_out->count()) cfg.out = out_dir;
        if (o_format->count()) cfg.format = parse_format(format);
        if (o_threads->count()) cfg.threads = threads;
        if (o_seed->count()) cfg.seed = seed;
        ov.apply(cfg);
        const int status = run_experiment(cfg);
        if (status) std::cerr << "plasmonqd: verification failed, see " << (cfg.out / "manifest.json").string() << "\n";
        return status;
    } catch (const Error& e) {
        std::cerr << "plasmonqd: " << e.what() << "\n";
        return static_cast<int>(e.kind());
    } catch (const std::exception& e) {
        std::cerr << "plasmonqd: " << e.what() << "\n";
        return static_cast<int>(ErrorClass::config);
    }
}
