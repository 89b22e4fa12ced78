#include "racl/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "racl/error.hpp"

namespace racl {

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

double parse_number(const std::string& v, const std::string& key) {
    try {
        std::size_t used = 0;
        const double x = std::stod(v, &used);
        if (used != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw config_error("config: bad numeric value for " + key + ": " + v);
    }
}

std::int64_t parse_int(const std::string& v, const std::string& key) {
    std::int64_t x = 0;
    const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
    if (ec != std::errc{} || p != v.data() + v.size())
        throw config_error("config: bad integer value for " + key + ": " + v);
    return x;
}

bool parse_bool(const std::string& v, const std::string& key) {
    if (v == "true") return true;
    if (v == "false") return false;
    throw config_error("config: bad boolean value for " + key + ": " + v);
}

std::string parse_string(const std::string& v, const std::string& key) {
    if (v.size() < 2 || v.front() != '"' || v.back() != '"')
        throw config_error("config: expected quoted string for " + key + ": " + v);
    return v.substr(1, v.size() - 2);
}

} // namespace

RunConfig RunConfig::from_toml_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw io_error("config: cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return from_toml(buf.str());
}

RunConfig RunConfig::from_toml(const std::string& text) {
    RunConfig cfg;
    std::istringstream in(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw config_error("config: malformed section at line " +
                                   std::to_string(lineno));
            section = trim(line.substr(1, line.size() - 2));
            if (section != "train" && section != "beta" && section != "alpha" &&
                section != "focal" && section != "tau" && section != "model" &&
                section != "noise" && section != "metrics")
                throw config_error("config: unknown section [" + section + "]");
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw config_error("config: expected key = value at line " +
                               std::to_string(lineno));
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        const std::string qual = section + "." + key;

        auto& t = cfg.train;
        if (qual == "train.total_epochs") t.total_epochs = static_cast<int>(parse_int(value, qual));
        else if (qual == "train.warmup_epochs") t.warmup_epochs = static_cast<int>(parse_int(value, qual));
        else if (qual == "train.learning_rate") t.learning_rate = parse_number(value, qual);
        else if (qual == "train.warmup_learning_rate") t.warmup_learning_rate = parse_number(value, qual);
        else if (qual == "train.batch_size") t.batch_size = static_cast<int>(parse_int(value, qual));
        else if (qual == "train.seed") t.seed = static_cast<std::uint64_t>(parse_int(value, qual));
        else if (qual == "beta.beta0") t.beta0 = parse_number(value, qual);
        else if (qual == "beta.beta1") t.beta1 = parse_number(value, qual);
        else if (qual == "alpha.k") t.alpha_params.k = parse_number(value, qual);
        else if (qual == "alpha.epsilon") t.alpha_params.epsilon = parse_number(value, qual);
        else if (qual == "alpha.alpha_max") t.alpha_params.alpha_max = parse_number(value, qual);
        else if (qual == "alpha.selector") {
            const std::string s = parse_string(value, qual);
            if (s == "observed_label") t.alpha_selector = AlphaSelector::observed_label;
            else if (s == "candidate_label") t.alpha_selector = AlphaSelector::candidate_label;
            else throw config_error("config: unknown alpha selector: " + s);
        } else if (qual == "alpha.reestimate_per_epoch")
            t.reestimate_alpha_per_epoch = parse_bool(value, qual);
        else if (qual == "focal.gamma") t.focal_cfg.gamma = parse_number(value, qual);
        else if (qual == "focal.lambda_mix") t.focal_cfg.lambda_mix = parse_number(value, qual);
        else if (qual == "tau.policy") {
            const std::string s = parse_string(value, qual);
            if (s == "mean") t.tau_policy = TauPolicy::mean;
            else if (s == "quantile") t.tau_policy = TauPolicy::quantile;
            else throw config_error("config: unknown tau policy: " + s);
        } else if (qual == "tau.q") t.tau_quantile = parse_number(value, qual);
        else if (qual == "model.kind") cfg.model_kind = model_kind_from_string(parse_string(value, qual));
        else if (qual == "model.hidden_size") cfg.hidden_size = static_cast<int>(parse_int(value, qual));
        else if (qual == "noise.rate") cfg.noise.noise_rate = parse_number(value, qual);
        else if (qual == "noise.proxy_fraction") cfg.noise.proxy_fraction = parse_number(value, qual);
        else if (qual == "noise.seed") cfg.noise.seed = static_cast<std::uint64_t>(parse_int(value, qual));
        else if (qual == "noise.bernoulli") cfg.noise.bernoulli = parse_bool(value, qual);
        else if (qual == "metrics.averaging") {
            const std::string s = parse_string(value, qual);
            if (s == "macro") cfg.averaging = Averaging::macro;
            else if (s == "micro") cfg.averaging = Averaging::micro;
            else throw config_error("config: unknown averaging: " + s);
        } else
            throw config_error("config: unknown key " + qual);
    }
    return cfg;
}

std::string RunConfig::canonical() const {
    std::ostringstream out;
    out.precision(17);
    const auto& t = train;
    out << "train.total_epochs=" << t.total_epochs << '\n'
        << "train.warmup_epochs=" << t.warmup_epochs << '\n'
        << "train.learning_rate=" << t.learning_rate << '\n'
        << "train.warmup_learning_rate=" << t.warmup_learning_rate << '\n'
        << "train.batch_size=" << t.batch_size << '\n'
        << "train.seed=" << t.seed << '\n'
        << "beta.beta0=" << t.beta0 << '\n'
        << "beta.beta1=" << t.beta1 << '\n'
        << "alpha.k=" << t.alpha_params.k << '\n'
        << "alpha.epsilon=" << t.alpha_params.epsilon << '\n'
        << "alpha.alpha_max=" << t.alpha_params.alpha_max << '\n'
        << "alpha.selector="
        << (t.alpha_selector == AlphaSelector::observed_label ? "observed_label"
                                                              : "candidate_label")
        << '\n'
        << "alpha.reestimate_per_epoch=" << (t.reestimate_alpha_per_epoch ? "true" : "false")
        << '\n'
        << "focal.gamma=" << t.focal_cfg.gamma << '\n'
        << "focal.lambda_mix=" << t.focal_cfg.lambda_mix << '\n'
        << "tau.policy=" << (t.tau_policy == TauPolicy::mean ? "mean" : "quantile") << '\n'
        << "tau.q=" << t.tau_quantile << '\n'
        << "model.kind=" << to_string(model_kind) << '\n'
        << "model.hidden_size=" << hidden_size << '\n'
        << "noise.rate=" << noise.noise_rate << '\n'
        << "noise.proxy_fraction=" << noise.proxy_fraction << '\n'
        << "noise.seed=" << noise.seed << '\n'
        << "noise.bernoulli=" << (noise.bernoulli ? "true" : "false") << '\n'
        << "metrics.averaging=" << (averaging == Averaging::macro ? "macro" : "micro")
        << '\n';
    return out.str();
}

} // namespace racl
