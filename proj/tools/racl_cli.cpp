// racl: label-noise-robust classification toolkit.
//
// Subcommands: gen-noise, train, eval, demo, schedule.
// Exit codes: 0 success, 2 I/O or parse failure, 3 invalid configuration,
// 4 numerical failure.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <set>

#include <CLI11.hpp>
#include <json.hpp>

#include "racl/config.hpp"
#include "racl/error.hpp"
#include "racl/io.hpp"
#include "racl/noise.hpp"
#include "racl/trainer.hpp"

namespace {

using nlohmann::json;

constexpr int kExitIo = 2;
constexpr int kExitConfig = 3;
constexpr int kExitNumerical = 4;

int run_gen_noise(const std::string& input, const std::string& map_path,
                  int adjacent_k, double rate, double proxy_fraction,
                  std::uint64_t seed, bool bernoulli, const std::string& out_path,
                  const std::string& audit_path) {
    if (map_path.empty() && adjacent_k == 0)
        throw racl::config_error("gen-noise: pass --map or --adjacent");
    const racl::Dataset dataset = racl::io::read_dataset_csv(input);
    const racl::MisdiagnosisMap map = map_path.empty()
                                          ? racl::adjacent_grade_map(adjacent_k)
                                          : racl::io::read_map_json(map_path);
    racl::NoiseConfig cfg;
    cfg.noise_rate = rate;
    cfg.proxy_fraction = proxy_fraction;
    cfg.seed = seed;
    cfg.bernoulli = bernoulli;

    const racl::NoisyDataset noisy = racl::generate_noise(dataset, map, cfg);
    racl::io::write_dataset_csv(out_path, noisy.observed());
    racl::io::write_audit_json(audit_path, noisy, cfg);

    std::int64_t flips = 0;
    for (const auto& s : noisy.samples) flips += s.flipped;
    const json line = {{"samples", noisy.samples.size()}, {"flips", flips},
                       {"out", out_path}, {"audit", audit_path}};
    std::cout << line.dump() << '\n';
    return 0;
}

int run_train(const std::string& data_path, const std::string& config_path,
              const std::string& loss_name, const std::string& model_path,
              const std::string& log_prefix) {
    racl::RunConfig cfg;
    if (!config_path.empty()) cfg = racl::RunConfig::from_toml_file(config_path);
    const racl::LossKind loss = racl::loss_kind_from_string(loss_name);
    if (loss != racl::LossKind::racl)
        std::cerr << "warning: --loss " << loss_name
                  << " ignores the alpha/beta configuration\n";

    const racl::Dataset observed = racl::io::read_dataset_csv(data_path);
    racl::NoisyDataset data;
    data.num_classes = observed.num_classes;
    for (const auto& s : observed.samples)
        data.samples.push_back({s.id, s.features, s.label, s.label, false,
                                std::numeric_limits<double>::quiet_NaN()});

    racl::ModelSpec spec;
    spec.kind = cfg.model_kind;
    spec.hidden_size = cfg.hidden_size;
    spec.input_dim = observed.dim();
    spec.num_classes = observed.num_classes;

    const racl::TrainResult result =
        loss == racl::LossKind::racl
            ? racl::fit_racl(data, spec, cfg.train)
            : racl::fit_baseline(data, spec, cfg.train, loss);

    racl::io::write_model_json(model_path, result.model, cfg.train.seed,
                               racl::io::fnv1a_hex(cfg.canonical()));
    if (!log_prefix.empty())
        racl::io::write_training_log(log_prefix, result.log, cfg.train);

    std::cout << racl::io::eval_summary_line(racl::evaluate(result.model, observed))
              << '\n';
    return 0;
}

int run_eval(const std::string& model_path, const std::string& data_path,
             const std::string& audit_path, const std::string& report_path) {
    const racl::Model model = racl::io::read_model_json(model_path);
    racl::Dataset data = racl::io::read_dataset_csv(data_path, model.spec().num_classes);
    if (data.dim() != model.spec().input_dim)
        throw racl::config_error("eval: model/data feature dimension mismatch");

    std::map<std::string, std::string> echo = {{"model", model_path},
                                               {"data", data_path}};
    json extra;
    if (!audit_path.empty()) {
        const auto audit = racl::io::read_audit_json(audit_path);
        std::map<std::int64_t, racl::io::AuditEntry> by_id;
        for (const auto& e : audit) by_id[e.id] = e;
        // score against clean labels; split accuracy by flip status
        std::int64_t flipped_total = 0, flipped_correct = 0;
        std::int64_t clean_total = 0, clean_correct = 0;
        for (auto& s : data.samples) {
            const auto it = by_id.find(s.id);
            if (it == by_id.end())
                throw racl::config_error("eval: sample id missing from audit: " +
                                         std::to_string(s.id));
            s.label = it->second.clean_label;
        }
        const auto scores = racl::score_dataset(model, data);
        for (std::size_t i = 0; i < data.samples.size(); ++i) {
            const auto& row = scores[i];
            const int pred = static_cast<int>(
                std::max_element(row.begin(), row.end()) - row.begin());
            const auto& e = by_id.at(data.samples[i].id);
            if (e.flipped) {
                ++flipped_total;
                flipped_correct += (pred == e.clean_label);
            } else {
                ++clean_total;
                clean_correct += (pred == e.clean_label);
            }
        }
        echo["audit"] = audit_path;
        extra["flipped_subset_accuracy"] =
            flipped_total > 0 ? json(static_cast<double>(flipped_correct) / flipped_total)
                              : json(nullptr);
        extra["clean_subset_accuracy"] =
            clean_total > 0 ? json(static_cast<double>(clean_correct) / clean_total)
                            : json(nullptr);
    }

    const racl::EvalResult result = racl::evaluate(model, data);
    racl::io::write_eval_report(report_path, result, echo);
    if (!extra.is_null()) {
        // append the subset accuracies into the written report
        std::ifstream in(report_path);
        json j;
        in >> j;
        in.close();
        for (const auto& [k, v] : extra.items()) j[k] = v;
        std::ofstream out(report_path);
        out << j.dump(2) << '\n';
    }
    std::cout << racl::io::eval_summary_line(result) << '\n';
    return 0;
}

int run_schedule(double beta0, double beta1, int t_max) {
    const racl::BetaSchedule schedule(beta0, beta1, t_max);
    std::cout << "t,beta\n";
    std::cout.precision(17);
    for (int t = 0; t <= t_max; ++t)
        std::cout << t << ',' << racl::beta_at(schedule, t) << '\n';
    return 0;
}

int run_demo(const std::string& preset, double noise_rate, std::uint64_t seed,
             const std::string& summary_path) {
    if (preset != "blobs") throw racl::config_error("demo: unknown preset " + preset);

    const int k = 3;
    const racl::Dataset train_clean = racl::synth_blobs(k, 1000, 2, 4.0, seed);
    const racl::Dataset test_set = racl::synth_blobs(k, 300, 2, 4.0, seed + 1);

    racl::NoiseConfig noise_cfg;
    noise_cfg.noise_rate = noise_rate;
    noise_cfg.seed = seed;
    noise_cfg.bernoulli = true; // literal per-sample flips for the comparison
    const racl::MisdiagnosisMap map = racl::adjacent_grade_map(k);
    racl::NoisyDataset noisy;
    if (noise_rate > 0.0) {
        noisy = racl::generate_noise(train_clean, map, noise_cfg);
    } else {
        noisy.num_classes = k;
        for (const auto& s : train_clean.samples)
            noisy.samples.push_back({s.id, s.features, s.label, s.label, false,
                                     std::numeric_limits<double>::quiet_NaN()});
    }

    racl::ModelSpec spec;
    spec.kind = racl::ModelSpec::Kind::linear_softmax;
    spec.input_dim = 2;
    spec.num_classes = k;

    racl::TrainConfig base;
    base.seed = seed;

    struct Arm {
        std::string name;
        racl::TrainConfig cfg;
        racl::LossKind loss;
    };
    std::vector<Arm> arms;
    {
        racl::TrainConfig ce = base;
        arms.push_back({"ce", ce, racl::LossKind::ce});
        racl::TrainConfig focal = base;
        arms.push_back({"focal", focal, racl::LossKind::focal});
        racl::TrainConfig racl_only = base;
        racl_only.focal_cfg.lambda_mix = 1.0;
        arms.push_back({"racl", racl_only, racl::LossKind::racl});
        racl::TrainConfig racl_focal = base;
        racl_focal.focal_cfg.lambda_mix = 0.9;
        arms.push_back({"racl+focal", racl_focal, racl::LossKind::racl});
    }

    json summary = {{"format_version", racl::io::kFormatVersion},
                    {"preset", preset},
                    {"noise_rate", noise_rate},
                    {"seed", seed},
                    {"arms", json::array()}};
    std::printf("%-12s %8s %8s %8s %8s\n", "arm", "ap", "auc", "f1", "acc");
    for (const auto& arm : arms) {
        const racl::TrainResult r =
            arm.loss == racl::LossKind::racl
                ? racl::fit_racl(noisy, spec, arm.cfg)
                : racl::fit_baseline(noisy, spec, arm.cfg, arm.loss);
        const racl::EvalResult ev = racl::evaluate(r.model, test_set);
        std::printf("%-12s %8.4f %8.4f %8.4f %8.4f\n", arm.name.c_str(), ev.ap_macro,
                    ev.auc_macro, ev.f1_macro, ev.accuracy);
        summary["arms"].push_back({{"name", arm.name},
                                   {"ap_macro", ev.ap_macro},
                                   {"auc_macro", ev.auc_macro},
                                   {"f1_macro", ev.f1_macro},
                                   {"accuracy", ev.accuracy}});
    }
    if (!summary_path.empty()) {
        std::ofstream out(summary_path);
        if (!out) throw racl::io_error("cannot write " + summary_path);
        out << summary.dump(2) << '\n';
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"racl: label-noise-robust classification toolkit"};
    app.require_subcommand(1);

    // gen-noise
    auto* gen = app.add_subcommand("gen-noise",
                                   "Inject clinically-shaped asymmetric label noise");
    std::string gn_input, gn_map, gn_out, gn_audit;
    int gn_adjacent = 0;
    double gn_rate = 0.1, gn_proxy = 0.3;
    std::uint64_t gn_seed = 0;
    bool gn_bernoulli = false;
    gen->add_option("--input", gn_input, "input dataset CSV")->required();
    gen->add_option("--map", gn_map, "misdiagnosis map JSON");
    gen->add_option("--adjacent", gn_adjacent,
                    "use the adjacent-grade map for K classes");
    gen->add_option("--rate", gn_rate, "noise rate in [0,1)")->capture_default_str();
    gen->add_option("--proxy-fraction", gn_proxy, "proxy split fraction")
        ->capture_default_str();
    gen->add_option("--seed", gn_seed, "RNG seed")->capture_default_str();
    gen->add_flag("--bernoulli", gn_bernoulli,
                  "independent per-sample flips instead of loss-ranked selection");
    gen->add_option("--out", gn_out, "noisy dataset CSV")->required();
    gen->add_option("--audit", gn_audit, "audit JSON (keeps clean labels)")->required();

    // train
    auto* train = app.add_subcommand("train", "Train a classifier on a dataset CSV");
    std::string tr_data, tr_config, tr_loss = "racl", tr_model, tr_log;
    train->add_option("--data", tr_data, "training dataset CSV")->required();
    train->add_option("--config", tr_config, "run configuration TOML");
    train->add_option("--loss", tr_loss, "racl | ce | focal")->capture_default_str();
    train->add_option("--out", tr_model, "model JSON output")->required();
    train->add_option("--log", tr_log, "training log prefix (.csv/.json)");

    // eval
    auto* eval = app.add_subcommand("eval", "Evaluate a model on a dataset CSV");
    std::string ev_model, ev_data, ev_audit, ev_report;
    eval->add_option("--model", ev_model, "model JSON")->required();
    eval->add_option("--data", ev_data, "dataset CSV")->required();
    eval->add_option("--audit", ev_audit, "audit JSON: score against clean labels");
    eval->add_option("--report", ev_report, "report JSON output")->required();

    // demo
    auto* demo = app.add_subcommand("demo", "CE / FL / RACL / RACL+FL comparison");
    std::string dm_preset = "blobs", dm_summary;
    double dm_rate = 0.3;
    std::uint64_t dm_seed = 0;
    demo->add_option("--preset", dm_preset, "data preset")->capture_default_str();
    demo->add_option("--noise-rate", dm_rate, "noise rate")->capture_default_str();
    demo->add_option("--seed", dm_seed, "RNG seed")->capture_default_str();
    demo->add_option("--summary", dm_summary, "summary JSON output");

    // schedule
    auto* sched = app.add_subcommand("schedule", "Print the cosine beta schedule");
    double sc_beta0 = 0.75, sc_beta1 = 0.55;
    int sc_tmax = 25;
    sched->add_option("--beta0", sc_beta0, "start value")->capture_default_str();
    sched->add_option("--beta1", sc_beta1, "end value")->capture_default_str();
    sched->add_option("--tmax", sc_tmax, "last epoch index")->capture_default_str();

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed())
            return run_gen_noise(gn_input, gn_map, gn_adjacent, gn_rate, gn_proxy,
                                 gn_seed, gn_bernoulli, gn_out, gn_audit);
        if (train->parsed()) return run_train(tr_data, tr_config, tr_loss, tr_model, tr_log);
        if (eval->parsed()) return run_eval(ev_model, ev_data, ev_audit, ev_report);
        if (demo->parsed()) return run_demo(dm_preset, dm_rate, dm_seed, dm_summary);
        if (sched->parsed()) return run_schedule(sc_beta0, sc_beta1, sc_tmax);
    } catch (const racl::io_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitIo;
    } catch (const racl::numerical_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const racl::config_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const racl::invalid_input& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitConfig;
    }
    return 0;
}
