#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <unistd.h>

#include "racl/config.hpp"
#include "racl/error.hpp"
#include "racl/io.hpp"
#include "racl/trainer.hpp"

using namespace racl;

namespace {

struct TempDir {
    std::filesystem::path path;
    TempDir() {
        path = std::filesystem::temp_directory_path() /
               ("racl_test_" + std::to_string(::getpid()) + "_" +
                std::to_string(counter()++));
        std::filesystem::create_directories(path);
    }
    ~TempDir() { std::filesystem::remove_all(path); }
    std::string file(const std::string& name) const { return (path / name).string(); }
    static int& counter() {
        static int c = 0;
        return c;
    }
};

} // namespace

TEST_CASE("dataset CSV round trip") {
    TempDir tmp;
    const Dataset d = synth_blobs(3, 10, 2, 5.0, 1);
    io::write_dataset_csv(tmp.file("d.csv"), d);
    const Dataset back = io::read_dataset_csv(tmp.file("d.csv"));
    REQUIRE(back.samples.size() == d.samples.size());
    CHECK(back.num_classes == 3);
    for (std::size_t i = 0; i < d.samples.size(); ++i) {
        CHECK(back.samples[i].id == d.samples[i].id);
        CHECK(back.samples[i].label == d.samples[i].label);
        CHECK(back.samples[i].features == d.samples[i].features);
    }
}

TEST_CASE("dataset CSV rejects malformed input") {
    TempDir tmp;
    {
        std::ofstream out(tmp.file("bad.csv"));
        out << "id,feat_0,label\n1,not_a_number,0\n";
    }
    CHECK_THROWS_AS(io::read_dataset_csv(tmp.file("bad.csv")), io_error);
    {
        std::ofstream out(tmp.file("hdr.csv"));
        out << "sample,feat_0,label\n";
    }
    CHECK_THROWS_AS(io::read_dataset_csv(tmp.file("hdr.csv")), io_error);
    CHECK_THROWS_AS(io::read_dataset_csv(tmp.file("missing.csv")), io_error);
}

TEST_CASE("misdiagnosis map JSON round trip") {
    TempDir tmp;
    const MisdiagnosisMap map = adjacent_grade_map(4);
    io::write_map_json(tmp.file("map.json"), map);
    const MisdiagnosisMap back = io::read_map_json(tmp.file("map.json"));
    CHECK(back.targets == map.targets);
}

TEST_CASE("audit JSON round trip") {
    TempDir tmp;
    const Dataset d = synth_blobs(2, 40, 2, 6.0, 3);
    NoiseConfig cfg{0.2, 0.3, 3, false};
    const NoisyDataset noisy = generate_noise(d, adjacent_grade_map(2), cfg);
    io::write_audit_json(tmp.file("audit.json"), noisy, cfg);
    const auto audit = io::read_audit_json(tmp.file("audit.json"));
    REQUIRE(audit.size() == noisy.samples.size());
    for (std::size_t i = 0; i < audit.size(); ++i) {
        CHECK(audit[i].id == noisy.samples[i].id);
        CHECK(audit[i].clean_label == noisy.samples[i].clean_label);
        CHECK(audit[i].observed_label == noisy.samples[i].observed_label);
        CHECK(audit[i].flipped == noisy.samples[i].flipped);
    }
}

TEST_CASE("model JSON round trip") {
    TempDir tmp;
    for (const auto kind : {ModelSpec::Kind::linear_softmax, ModelSpec::Kind::mlp}) {
        ModelSpec spec{kind, 3, 5, 4};
        Model model(spec);
        Rng rng(9);
        model.init(rng);
        io::write_model_json(tmp.file("m.json"), model, 9, "deadbeef");
        const Model back = io::read_model_json(tmp.file("m.json"));
        CHECK(back.spec().kind == kind);
        CHECK(back.params() == model.params());
    }
}

TEST_CASE("training log files are written") {
    TempDir tmp;
    const Dataset train = synth_blobs(2, 40, 2, 6.0, 5);
    NoisyDataset noisy;
    noisy.num_classes = 2;
    for (const auto& s : train.samples)
        noisy.samples.push_back({s.id, s.features, s.label, s.label, false, 0.0});
    ModelSpec spec{ModelSpec::Kind::linear_softmax, 2, 16, 2};
    TrainConfig cfg;
    cfg.total_epochs = 6;
    cfg.warmup_epochs = 2;
    const TrainResult r = fit_racl(noisy, spec, cfg);
    io::write_training_log(tmp.file("log"), r.log, cfg);
    CHECK(std::filesystem::exists(tmp.file("log.csv")));
    CHECK(std::filesystem::exists(tmp.file("log.json")));

    std::ifstream in(tmp.file("log.csv"));
    std::string header;
    std::getline(in, header);
    CHECK(header.find("beta0=0.75") != std::string::npos);
    CHECK(header.find("beta1=0.55") != std::string::npos);
    CHECK(header.find("warmup=2") != std::string::npos);
}

TEST_CASE("warmup CSV serialization") {
    TempDir tmp;
    io::write_warmup_csv(tmp.file("w.csv"), {{1, 0, 0.25}, {2, 1, 1.5}});
    std::ifstream in(tmp.file("w.csv"));
    std::string line;
    std::getline(in, line);
    CHECK(line == "sample_id,observed_class,ce_loss");
    std::getline(in, line);
    CHECK(line.rfind("1,0,", 0) == 0);
}

TEST_CASE("TOML config parsing") {
    const std::string text = R"(
# run configuration
[train]
total_epochs = 20
warmup_epochs = 4
learning_rate = 0.1
seed = 99

[beta]
beta0 = 0.8
beta1 = 0.5

[alpha]
k = 0.07
selector = "candidate_label"

[focal]
gamma = 1.5
lambda_mix = 0.25

[tau]
policy = "quantile"
q = 0.7

[model]
kind = "mlp"
hidden_size = 24

[noise]
rate = 0.15
bernoulli = true
)";
    const RunConfig cfg = RunConfig::from_toml(text);
    CHECK(cfg.train.total_epochs == 20);
    CHECK(cfg.train.warmup_epochs == 4);
    CHECK(cfg.train.learning_rate == doctest::Approx(0.1));
    CHECK(cfg.train.seed == 99);
    CHECK(cfg.train.beta0 == doctest::Approx(0.8));
    CHECK(cfg.train.beta1 == doctest::Approx(0.5));
    CHECK(cfg.train.alpha_params.k == doctest::Approx(0.07));
    CHECK(cfg.train.alpha_selector == AlphaSelector::candidate_label);
    CHECK(cfg.train.focal_cfg.gamma == doctest::Approx(1.5));
    CHECK(cfg.train.tau_policy == TauPolicy::quantile);
    CHECK(cfg.train.tau_quantile == doctest::Approx(0.7));
    CHECK(cfg.model_kind == ModelSpec::Kind::mlp);
    CHECK(cfg.hidden_size == 24);
    CHECK(cfg.noise.noise_rate == doctest::Approx(0.15));
    CHECK(cfg.noise.bernoulli);
}

TEST_CASE("TOML config rejects unknown keys and sections") {
    CHECK_THROWS_AS(RunConfig::from_toml("[train]\nbogus = 1\n"), config_error);
    CHECK_THROWS_AS(RunConfig::from_toml("[bogus]\nx = 1\n"), config_error);
    CHECK_THROWS_AS(RunConfig::from_toml("[train]\ntotal_epochs = abc\n"), config_error);
    CHECK_THROWS_AS(RunConfig::from_toml("[tau]\npolicy = \"p99\"\n"), config_error);
}

TEST_CASE("canonical config serialization is hash-stable") {
    const RunConfig a = RunConfig::from_toml("[train]\nseed = 5\n");
    const RunConfig b = RunConfig::from_toml("# comment\n[train]\nseed = 5\n");
    CHECK(io::fnv1a_hex(a.canonical()) == io::fnv1a_hex(b.canonical()));
    const RunConfig c = RunConfig::from_toml("[train]\nseed = 6\n");
    CHECK(io::fnv1a_hex(a.canonical()) != io::fnv1a_hex(c.canonical()));
}
