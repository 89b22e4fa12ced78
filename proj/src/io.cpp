#include "racl/io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "racl/error.hpp"

namespace racl::io {

using nlohmann::json;

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            fields.push_back(cur);
            cur.clear();
        } else if (ch != '\r') {
            cur.push_back(ch);
        }
    }
    fields.push_back(cur);
    return fields;
}

json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open " + path);
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw io_error("malformed JSON in " + path + ": " + e.what());
    }
    return j;
}

void dump_json(const std::string& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw io_error("cannot write " + path);
    out << j.dump(2) << '\n';
}

} // namespace

Dataset read_dataset_csv(const std::string& path, int num_classes) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open " + path);
    std::string line;
    if (!std::getline(in, line)) throw io_error("empty dataset file: " + path);
    const std::vector<std::string> header = split_csv_line(line);
    if (header.size() < 3 || header.front() != "id" || header.back() != "label")
        throw io_error("bad dataset header in " + path +
                       " (expected id,feat_0..,label)");
    const std::size_t dim = header.size() - 2;
    for (std::size_t j = 0; j < dim; ++j)
        if (header[j + 1] != "feat_" + std::to_string(j))
            throw io_error("bad feature column name in " + path + ": " + header[j + 1]);

    Dataset data;
    int max_label = 0;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line == "\r") continue;
        const std::vector<std::string> fields = split_csv_line(line);
        if (fields.size() != header.size())
            throw io_error(path + ":" + std::to_string(lineno) + ": wrong field count");
        try {
            Sample s;
            s.id = std::stoll(fields.front());
            s.features.reserve(dim);
            for (std::size_t j = 0; j < dim; ++j)
                s.features.push_back(std::stod(fields[j + 1]));
            s.label = std::stoi(fields.back());
            if (s.label < 0)
                throw io_error(path + ":" + std::to_string(lineno) + ": negative label");
            max_label = std::max(max_label, s.label);
            data.samples.push_back(std::move(s));
        } catch (const std::invalid_argument&) {
            throw io_error(path + ":" + std::to_string(lineno) + ": malformed number");
        } catch (const std::out_of_range&) {
            throw io_error(path + ":" + std::to_string(lineno) + ": number out of range");
        }
    }
    data.num_classes = num_classes > 0 ? num_classes : max_label + 1;
    data.validate();
    return data;
}

void write_dataset_csv(const std::string& path, const Dataset& data) {
    std::ofstream out(path);
    if (!out) throw io_error("cannot write " + path);
    out << "id";
    for (int j = 0; j < data.dim(); ++j) out << ",feat_" << j;
    out << ",label\n";
    out << std::setprecision(17);
    for (const auto& s : data.samples) {
        out << s.id;
        for (double v : s.features) out << ',' << v;
        out << ',' << s.label << '\n';
    }
}

MisdiagnosisMap read_map_json(const std::string& path) {
    const json j = load_json(path);
    if (!j.is_object()) throw io_error("misdiagnosis map must be a JSON object");
    MisdiagnosisMap map;
    for (const auto& [key, value] : j.items()) {
        int c = 0;
        try {
            c = std::stoi(key);
        } catch (const std::exception&) {
            throw io_error("misdiagnosis map: non-integer class key " + key);
        }
        if (!value.is_array()) throw io_error("misdiagnosis map: values must be arrays");
        map.targets[c] = value.get<std::vector<int>>();
    }
    return map;
}

void write_map_json(const std::string& path, const MisdiagnosisMap& map) {
    json j = json::object();
    for (const auto& [c, targets] : map.targets) j[std::to_string(c)] = targets;
    dump_json(path, j);
}

void write_audit_json(const std::string& path, const NoisyDataset& data,
                      const NoiseConfig& cfg) {
    json samples = json::array();
    for (const auto& s : data.samples) {
        json row = {{"id", s.id},
                    {"clean_label", s.clean_label},
                    {"observed_label", s.observed_label},
                    {"flipped", s.flipped}};
        if (std::isnan(s.candidate_loss))
            row["candidate_loss"] = nullptr;
        else
            row["candidate_loss"] = s.candidate_loss;
        samples.push_back(std::move(row));
    }
    const json j = {{"format_version", kFormatVersion},
                    {"config",
                     {{"noise_rate", cfg.noise_rate},
                      {"proxy_fraction", cfg.proxy_fraction},
                      {"bernoulli", cfg.bernoulli}}},
                    {"seed", cfg.seed},
                    {"num_classes", data.num_classes},
                    {"samples", samples}};
    dump_json(path, j);
}

std::vector<AuditEntry> read_audit_json(const std::string& path) {
    const json j = load_json(path);
    if (!j.contains("samples")) throw io_error("audit file misses 'samples': " + path);
    std::vector<AuditEntry> out;
    for (const auto& row : j.at("samples")) {
        AuditEntry e;
        e.id = row.at("id").get<std::int64_t>();
        e.clean_label = row.at("clean_label").get<int>();
        e.observed_label = row.at("observed_label").get<int>();
        e.flipped = row.at("flipped").get<bool>();
        e.candidate_loss = row.at("candidate_loss").is_null()
                               ? std::numeric_limits<double>::quiet_NaN()
                               : row.at("candidate_loss").get<double>();
        out.push_back(e);
    }
    return out;
}

void write_warmup_csv(const std::string& path,
                      const std::vector<WarmupLossRecord>& records) {
    std::ofstream out(path);
    if (!out) throw io_error("cannot write " + path);
    out << "sample_id,observed_class,ce_loss\n" << std::setprecision(17);
    for (const auto& r : records)
        out << r.sample_id << ',' << r.observed_class << ',' << r.ce_loss << '\n';
}

void write_model_json(const std::string& path, const Model& model,
                      std::uint64_t seed, const std::string& config_hash) {
    const ModelSpec& spec = model.spec();
    const auto d = static_cast<std::size_t>(spec.input_dim);
    const auto k = static_cast<std::size_t>(spec.num_classes);
    const auto& p = model.params();

    auto matrix = [&](std::size_t off, std::size_t rows, std::size_t cols) {
        json m = json::array();
        for (std::size_t r = 0; r < rows; ++r) {
            json row = json::array();
            for (std::size_t c = 0; c < cols; ++c) row.push_back(p[off + r * cols + c]);
            m.push_back(std::move(row));
        }
        return m;
    };
    auto vec = [&](std::size_t off, std::size_t n) {
        json v = json::array();
        for (std::size_t i = 0; i < n; ++i) v.push_back(p[off + i]);
        return v;
    };

    json weights;
    if (spec.kind == ModelSpec::Kind::linear_softmax) {
        weights = {{"W", matrix(0, k, d)}, {"b", vec(k * d, k)}};
    } else {
        const auto h = static_cast<std::size_t>(spec.hidden_size);
        weights = {{"W1", matrix(0, h, d)},
                   {"b1", vec(h * d, h)},
                   {"W2", matrix(h * d + h, k, h)},
                   {"b2", vec(h * d + h + k * h, k)}};
    }
    const json j = {{"format_version", kFormatVersion},
                    {"spec",
                     {{"kind", to_string(spec.kind)},
                      {"input_dim", spec.input_dim},
                      {"hidden_size", spec.hidden_size},
                      {"num_classes", spec.num_classes}}},
                    {"weights", weights},
                    {"seed", seed},
                    {"config_hash", config_hash}};
    dump_json(path, j);
}

Model read_model_json(const std::string& path) {
    const json j = load_json(path);
    ModelSpec spec;
    try {
        const json& js = j.at("spec");
        spec.kind = model_kind_from_string(js.at("kind").get<std::string>());
        spec.input_dim = js.at("input_dim").get<int>();
        spec.hidden_size = js.at("hidden_size").get<int>();
        spec.num_classes = js.at("num_classes").get<int>();
    } catch (const json::exception& e) {
        throw io_error("bad model file " + path + ": " + e.what());
    }
    Model model(spec);
    auto& p = model.params();
    std::size_t off = 0;
    auto read_matrix = [&](const json& m) {
        for (const auto& row : m)
            for (const auto& v : row) p.at(off++) = v.get<double>();
    };
    auto read_vec = [&](const json& v) {
        for (const auto& x : v) p.at(off++) = x.get<double>();
    };
    try {
        const json& w = j.at("weights");
        if (spec.kind == ModelSpec::Kind::linear_softmax) {
            read_matrix(w.at("W"));
            read_vec(w.at("b"));
        } else {
            read_matrix(w.at("W1"));
            read_vec(w.at("b1"));
            read_matrix(w.at("W2"));
            read_vec(w.at("b2"));
        }
        if (off != p.size()) throw io_error("bad model file " + path + ": weight count");
    } catch (const json::exception& e) {
        throw io_error("bad model file " + path + ": " + e.what());
    }
    return model;
}

void write_training_log(const std::string& prefix, const TrainingLog& log,
                        const TrainConfig& cfg) {
    {
        std::ofstream out(prefix + ".csv");
        if (!out) throw io_error("cannot write " + prefix + ".csv");
        out << "# loss=" << to_string(log.loss_kind) << " beta0=" << cfg.beta0
            << " beta1=" << cfg.beta1 << " warmup=" << cfg.warmup_epochs
            << " epochs=" << cfg.total_epochs << " seed=" << cfg.seed << '\n';
        out << "epoch,phase,beta,mean_racl,mean_focal,mean_combined,train_accuracy,"
               "shuffle_seed\n"
            << std::setprecision(17);
        for (const auto& r : log.epochs)
            out << r.epoch << ',' << r.phase << ',' << r.beta << ',' << r.mean_racl
                << ',' << r.mean_focal << ',' << r.mean_combined << ','
                << r.train_accuracy << ',' << r.shuffle_seed << '\n';
    }

    json warmup = json::array();
    for (const auto& r : log.warmup_losses)
        warmup.push_back({{"sample_id", r.sample_id},
                          {"observed_class", r.observed_class},
                          {"ce_loss", r.ce_loss}});
    const json j = {{"format_version", kFormatVersion},
                    {"loss", to_string(log.loss_kind)},
                    {"tau", log.tau},
                    {"error_rates", log.error_rates},
                    {"alphas", log.alphas},
                    {"empty_classes", log.empty_classes},
                    {"warmup_losses", warmup}};
    dump_json(prefix + ".json", j);
}

namespace {

json eval_to_json(const EvalResult& r) {
    json per_class = json::array();
    for (std::size_t c = 0; c < r.per_class.size(); ++c) {
        const auto& m = r.per_class[c];
        per_class.push_back(
            {{"precision", m.precision},
             {"recall", m.recall},
             {"f1", m.f1},
             {"support", m.support},
             {"auc", c < r.auc_per_class.size() && !std::isnan(r.auc_per_class[c])
                         ? json(r.auc_per_class[c])
                         : json(nullptr)},
             {"ap", c < r.ap_per_class.size() && !std::isnan(r.ap_per_class[c])
                        ? json(r.ap_per_class[c])
                        : json(nullptr)}});
    }
    return {{"ap_macro", r.ap_macro},
            {"auc_macro", r.auc_macro},
            {"precision_macro", r.precision_macro},
            {"recall_macro", r.recall_macro},
            {"f1_macro", r.f1_macro},
            {"accuracy", r.accuracy},
            {"confusion", r.confusion},
            {"per_class", per_class},
            {"skipped_classes", r.skipped_classes}};
}

} // namespace

void write_eval_report(const std::string& path, const EvalResult& result,
                       const std::map<std::string, std::string>& config_echo) {
    json j = eval_to_json(result);
    j["format_version"] = kFormatVersion;
    j["config"] = config_echo;
    dump_json(path, j);
}

std::string eval_summary_line(const EvalResult& result) {
    const json j = {{"ap_macro", result.ap_macro},
                    {"auc_macro", result.auc_macro},
                    {"precision_macro", result.precision_macro},
                    {"recall_macro", result.recall_macro},
                    {"f1_macro", result.f1_macro},
                    {"accuracy", result.accuracy}};
    return j.dump();
}

std::string fnv1a_hex(const std::string& text) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    std::ostringstream out;
    out << std::hex << std::setw(16) << std::setfill('0') << h;
    return out.str();
}

} // namespace racl::io
