#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "displab/experiments.hpp"
#include "displab/exponents.hpp"
#include "displab/report.hpp"

using nlohmann::json;

namespace {

double parse_exponent(const json& v, double fallback) {
    if (v.is_null()) return fallback;
    if (v.is_string()) {
        std::string s = v.get<std::string>();
        if (s == "inf" || s == "Inf" || s == "infinity")
            return std::numeric_limits<double>::infinity();
        return std::stod(s);
    }
    return v.get<double>();
}

displab::ExperimentConfig load_config(const std::string& path) {
    displab::ExperimentConfig cfg;
    if (path.empty()) return cfg;
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open config " + path);
    json doc = json::parse(is);
    if (doc.contains("grid")) {
        const auto& g = doc["grid"];
        if (g.contains("d")) cfg.d = g["d"].get<int>();
        if (g.contains("n")) cfg.n = g["n"].get<int>();
        if (g.contains("L")) cfg.L = g["L"].get<double>();
    }
    cfg.p = parse_exponent(doc.value("p", json()), cfg.p);
    cfg.q = parse_exponent(doc.value("q", json()), cfg.q);
    cfg.r = parse_exponent(doc.value("r", json()), cfg.r);
    if (doc.contains("s")) cfg.s = doc["s"].get<double>();
    if (doc.contains("k")) cfg.k = doc["k"].get<int>();
    if (doc.contains("eps_phase")) cfg.eps_phase = doc["eps_phase"].get<double>();
    if (doc.contains("scales"))
        cfg.scales = doc["scales"].get<std::vector<double>>();
    if (doc.contains("tolerance")) cfg.tolerance = doc["tolerance"].get<double>();
    if (doc.contains("seed")) cfg.seed = doc["seed"].get<std::uint64_t>();
    if (doc.contains("corpus")) cfg.corpus = doc["corpus"].get<int>();
    if (doc.contains("workers")) cfg.workers = doc["workers"].get<int>();
    return cfg;
}

std::string config_echo(const displab::ExperimentConfig& cfg) {
    json j;
    j["grid"] = {{"d", cfg.d}, {"n", cfg.n}, {"L", cfg.L}};
    auto expo = [](double v) -> json {
        if (std::isinf(v)) return "inf";
        return v;
    };
    j["p"] = expo(cfg.p);
    j["q"] = expo(cfg.q);
    j["r"] = expo(cfg.r);
    j["s"] = cfg.s;
    j["k"] = cfg.k;
    j["eps_phase"] = cfg.eps_phase;
    j["scales"] = cfg.scales;
    j["tolerance"] = cfg.tolerance;
    j["seed"] = cfg.seed;
    j["corpus"] = cfg.corpus;
    return j.dump();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"displab: dispersive-estimate scaling laboratory"};
    app.require_subcommand(1);

    // `displab table --p .. --q .. --d .. --k ..` prints the exponent bundle.
    auto* table = app.add_subcommand("table", "print the exponent bundle");
    std::string tp = "4", tq = "2", tr = "2";
    int td = 1, tk = 0;
    table->add_option("--p", tp);
    table->add_option("--q", tq);
    table->add_option("--r", tr);
    table->add_option("--d", td);
    table->add_option("--k", tk);

    std::string config_path, out_dir = ".";
    std::uint64_t seed = 0;
    int workers = 0;
    std::vector<CLI::App*> subs;
    for (const auto& name : displab::experiment_names()) {
        auto* sub = app.add_subcommand(name, "run the " + name + " experiment");
        sub->add_option("--config", config_path, "JSON config path");
        sub->add_option("--out", out_dir, "output directory");
        sub->add_option("--seed", seed, "override RNG seed");
        sub->add_option("--workers", workers, "worker pool size");
        subs.push_back(sub);
    }

    CLI11_PARSE(app, argc, argv);

    try {
        if (table->parsed()) {
            auto str2e = [](const std::string& s) {
                if (s == "inf") return std::numeric_limits<double>::infinity();
                return std::stod(s);
            };
            auto b = displab::theoretical_exponents(str2e(tp), str2e(tq),
                                                    str2e(tr), td, tk);
            json j;
            j["s"] = b.s_dec;
            j["alpha"] = b.alpha_dec;
            j["s_nec_mod"] = b.s_nec_mod;
            j["s_nec_lp"] = b.s_nec_lp;
            j["global_admissible"] = b.global_admissible;
            j["case_b"] = b.case_b;
            j["case_c"] = b.case_c;
            j["fixed_time"] = b.fixed_time;
            std::cout << j.dump(2) << "\n";
            return 0;
        }

        for (const auto& name : displab::experiment_names()) {
            if (!app.get_subcommand(name)->parsed()) continue;
            displab::ExperimentConfig cfg = load_config(config_path);
            if (seed != 0) cfg.seed = seed;
            if (workers != 0) cfg.workers = workers;
            auto result = displab::run_experiment(name, cfg);

            std::filesystem::create_directories(out_dir);
            displab::write_file(out_dir + "/result.csv", displab::to_csv(result));
            displab::write_file(out_dir + "/result.json",
                                displab::to_json(result, config_echo(cfg)));
            displab::write_file(out_dir + "/plot.svg", displab::to_svg(result));

            std::printf("%s: %s", name.c_str(),
                        result.passed ? "PASS" : "FAIL");
            if (result.slope_asserted)
                std::printf(" (slope %.4f, target %.4f +- %.3f)",
                            result.fit.slope, result.target_slope,
                            result.tolerance);
            std::printf("\n");
            for (const auto& n : result.notes)
                std::printf("  %s\n", n.c_str());
            return result.passed ? 0 : 1;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
