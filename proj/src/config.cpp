#include "phgcl/config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>
#include <system_error>

namespace phgcl {

void TrainConfig::validate() const {
    auto rate = [](double v, const char* name) {
        if (v < 0.0 || v > 1.0) {
            throw std::invalid_argument(std::string("config: ") + name + " must lie in [0, 1]");
        }
    };
    rate(p_e, "p_e");
    rate(p_f, "p_f");
    rate(p_tau, "p_tau");
    if (p_e > p_tau || p_f > p_tau) {
        throw std::invalid_argument("config: p_e and p_f must not exceed p_tau");
    }
    if (!(rho > 0.0) || rho > 1.0) throw std::invalid_argument("config: rho must lie in (0, 1]");
    if (!(damping > 0.0) || !(damping < 1.0)) {
        throw std::invalid_argument("config: damping must lie in (0, 1)");
    }
    if (!(tau > 0.0)) throw std::invalid_argument("config: tau must be positive");
    if (!(lambda1 > 0.0) || lambda1 > 1.0 || !(lambda2 > 0.0) || lambda2 > 1.0) {
        throw std::invalid_argument("config: lambda1 and lambda2 must lie in (0, 1]");
    }
    if (layers < 1) throw std::invalid_argument("config: layers must be >= 1");
    if (heads < 1 || d_h < 1 || d_h % heads != 0) {
        throw std::invalid_argument("config: heads must be >= 1 and divide d_h");
    }
    if (epochs < 1) throw std::invalid_argument("config: epochs must be >= 1");
    if (batch_size < 1) throw std::invalid_argument("config: batch_size must be >= 1");
    if (folds < 1) throw std::invalid_argument("config: folds must be >= 1");
    if (repeats < 1) throw std::invalid_argument("config: repeats must be >= 1");
    if (!(base_lr > 0.0)) throw std::invalid_argument("config: base_lr must be positive");
    if (lr_floor < 0.0 || lr_floor > base_lr) {
        throw std::invalid_argument("config: lr_floor must lie in [0, base_lr]");
    }
    if (topo_k < 0) throw std::invalid_argument("config: topo_k must be >= 0");
    if (threads < 1) throw std::invalid_argument("config: threads must be >= 1");
}

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& v) {
    double out = 0.0;
    const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || p != v.data() + v.size()) {
        throw std::invalid_argument("config: bad number for " + key + ": '" + v + "'");
    }
    return out;
}

int parse_int(const std::string& key, const std::string& v) {
    int out = 0;
    const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || p != v.data() + v.size()) {
        throw std::invalid_argument("config: bad integer for " + key + ": '" + v + "'");
    }
    return out;
}

std::uint64_t parse_u64(const std::string& key, const std::string& v) {
    std::uint64_t out = 0;
    const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || p != v.data() + v.size()) {
        throw std::invalid_argument("config: bad unsigned integer for " + key + ": '" + v + "'");
    }
    return out;
}

bool parse_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1") return true;
    if (v == "false" || v == "0") return false;
    throw std::invalid_argument("config: bad boolean for " + key + ": '" + v + "'");
}

std::string format_double(double v) {
    char buf[64];
    const auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
    if (ec != std::errc()) throw std::logic_error("config: double formatting failed");
    return std::string(buf, p);
}

using Setter = std::function<void(TrainConfig&, const std::string&, const std::string&)>;

const std::map<std::string, Setter>& setters() {
    static const std::map<std::string, Setter> table = {
        {"rho", [](TrainConfig& c, const std::string& k, const std::string& v) { c.rho = parse_double(k, v); }},
        {"p_e", [](TrainConfig& c, const std::string& k, const std::string& v) { c.p_e = parse_double(k, v); }},
        {"p_f", [](TrainConfig& c, const std::string& k, const std::string& v) { c.p_f = parse_double(k, v); }},
        {"p_tau", [](TrainConfig& c, const std::string& k, const std::string& v) { c.p_tau = parse_double(k, v); }},
        {"damping", [](TrainConfig& c, const std::string& k, const std::string& v) { c.damping = parse_double(k, v); }},
        {"layers", [](TrainConfig& c, const std::string& k, const std::string& v) { c.layers = parse_int(k, v); }},
        {"heads", [](TrainConfig& c, const std::string& k, const std::string& v) { c.heads = parse_int(k, v); }},
        {"d_h", [](TrainConfig& c, const std::string& k, const std::string& v) { c.d_h = parse_int(k, v); }},
        {"tau", [](TrainConfig& c, const std::string& k, const std::string& v) { c.tau = parse_double(k, v); }},
        {"lambda1", [](TrainConfig& c, const std::string& k, const std::string& v) { c.lambda1 = parse_double(k, v); }},
        {"lambda2", [](TrainConfig& c, const std::string& k, const std::string& v) { c.lambda2 = parse_double(k, v); }},
        {"epochs", [](TrainConfig& c, const std::string& k, const std::string& v) { c.epochs = parse_int(k, v); }},
        {"batch_size", [](TrainConfig& c, const std::string& k, const std::string& v) { c.batch_size = parse_int(k, v); }},
        {"base_lr", [](TrainConfig& c, const std::string& k, const std::string& v) { c.base_lr = parse_double(k, v); }},
        {"lr_floor", [](TrainConfig& c, const std::string& k, const std::string& v) { c.lr_floor = parse_double(k, v); }},
        {"seed", [](TrainConfig& c, const std::string& k, const std::string& v) { c.seed = parse_u64(k, v); }},
        {"folds", [](TrainConfig& c, const std::string& k, const std::string& v) { c.folds = parse_int(k, v); }},
        {"repeats", [](TrainConfig& c, const std::string& k, const std::string& v) { c.repeats = parse_int(k, v); }},
        {"use_augment", [](TrainConfig& c, const std::string& k, const std::string& v) { c.use_augment = parse_bool(k, v); }},
        {"use_ddformer", [](TrainConfig& c, const std::string& k, const std::string& v) { c.use_ddformer = parse_bool(k, v); }},
        {"use_gcl", [](TrainConfig& c, const std::string& k, const std::string& v) { c.use_gcl = parse_bool(k, v); }},
        {"use_topo", [](TrainConfig& c, const std::string& k, const std::string& v) { c.use_topo = parse_bool(k, v); }},
        {"attention_readout", [](TrainConfig& c, const std::string& k, const std::string& v) { c.attention_readout = parse_bool(k, v); }},
        {"symmetric_nce", [](TrainConfig& c, const std::string& k, const std::string& v) { c.symmetric_nce = parse_bool(k, v); }},
        {"topo_k", [](TrainConfig& c, const std::string& k, const std::string& v) { c.topo_k = parse_int(k, v); }},
        {"threads", [](TrainConfig& c, const std::string& k, const std::string& v) { c.threads = parse_int(k, v); }},
    };
    return table;
}

}  // namespace

TrainConfig parse_train_config(std::istream& in) {
    TrainConfig cfg;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos) {
            throw std::invalid_argument("config: line " + std::to_string(line_no) +
                                        " is not 'key = value'");
        }
        const std::string key = trim(t.substr(0, eq));
        const std::string value = trim(t.substr(eq + 1));
        const auto it = setters().find(key);
        if (it == setters().end()) {
            throw std::invalid_argument("config: unknown key '" + key + "' on line " +
                                        std::to_string(line_no));
        }
        it->second(cfg, key, value);
    }
    cfg.validate();
    return cfg;
}

TrainConfig load_train_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("config: cannot open " + path);
    return parse_train_config(in);
}

std::string serialize_train_config(const TrainConfig& cfg) {
    std::ostringstream out;
    out << "rho = " << format_double(cfg.rho) << '\n';
    out << "p_e = " << format_double(cfg.p_e) << '\n';
    out << "p_f = " << format_double(cfg.p_f) << '\n';
    out << "p_tau = " << format_double(cfg.p_tau) << '\n';
    out << "damping = " << format_double(cfg.damping) << '\n';
    out << "layers = " << cfg.layers << '\n';
    out << "heads = " << cfg.heads << '\n';
    out << "d_h = " << cfg.d_h << '\n';
    out << "tau = " << format_double(cfg.tau) << '\n';
    out << "lambda1 = " << format_double(cfg.lambda1) << '\n';
    out << "lambda2 = " << format_double(cfg.lambda2) << '\n';
    out << "epochs = " << cfg.epochs << '\n';
    out << "batch_size = " << cfg.batch_size << '\n';
    out << "base_lr = " << format_double(cfg.base_lr) << '\n';
    out << "lr_floor = " << format_double(cfg.lr_floor) << '\n';
    out << "seed = " << cfg.seed << '\n';
    out << "folds = " << cfg.folds << '\n';
    out << "repeats = " << cfg.repeats << '\n';
    out << "use_augment = " << (cfg.use_augment ? "true" : "false") << '\n';
    out << "use_ddformer = " << (cfg.use_ddformer ? "true" : "false") << '\n';
    out << "use_gcl = " << (cfg.use_gcl ? "true" : "false") << '\n';
    out << "use_topo = " << (cfg.use_topo ? "true" : "false") << '\n';
    out << "attention_readout = " << (cfg.attention_readout ? "true" : "false") << '\n';
    out << "symmetric_nce = " << (cfg.symmetric_nce ? "true" : "false") << '\n';
    out << "topo_k = " << cfg.topo_k << '\n';
    out << "threads = " << cfg.threads << '\n';
    return out.str();
}

}  // namespace phgcl
