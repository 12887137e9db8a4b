#include "phgcl/checkpoint.hpp"

#include <cstdint>
#include <cstring>
#include <fstream>
#include <map>
#include <stdexcept>

namespace phgcl {

// Raw little-endian doubles and fixed-width integers; the file is not
// meant to travel between machines of different byte order.

namespace {

constexpr char kMagic[8] = {'P', 'H', 'G', 'C', 'L', 'C', 'K', '1'};

void put_u32(std::ostream& out, std::uint32_t v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

void put_i64(std::ostream& out, std::int64_t v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

void put_f64(std::ostream& out, double v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

void put_string(std::ostream& out, const std::string& s) {
    put_u32(out, static_cast<std::uint32_t>(s.size()));
    out.write(s.data(), static_cast<std::streamsize>(s.size()));
}

void put_matrix(std::ostream& out, const std::string& name, const Matrix& m) {
    put_string(out, name);
    put_u32(out, static_cast<std::uint32_t>(m.rows));
    put_u32(out, static_cast<std::uint32_t>(m.cols));
    out.write(reinterpret_cast<const char*>(m.data.data()),
              static_cast<std::streamsize>(m.data.size() * sizeof(double)));
}

std::uint32_t get_u32(std::istream& in) {
    std::uint32_t v = 0;
    in.read(reinterpret_cast<char*>(&v), sizeof v);
    if (!in) throw std::runtime_error("checkpoint: truncated file");
    return v;
}

std::int64_t get_i64(std::istream& in) {
    std::int64_t v = 0;
    in.read(reinterpret_cast<char*>(&v), sizeof v);
    if (!in) throw std::runtime_error("checkpoint: truncated file");
    return v;
}

double get_f64(std::istream& in) {
    double v = 0;
    in.read(reinterpret_cast<char*>(&v), sizeof v);
    if (!in) throw std::runtime_error("checkpoint: truncated file");
    return v;
}

std::string get_string(std::istream& in) {
    const std::uint32_t len = get_u32(in);
    if (len > (1u << 20)) throw std::runtime_error("checkpoint: implausible string length");
    std::string s(len, '\0');
    in.read(s.data(), static_cast<std::streamsize>(len));
    if (!in) throw std::runtime_error("checkpoint: truncated file");
    return s;
}

Matrix get_matrix_body(std::istream& in) {
    const std::uint32_t rows = get_u32(in);
    const std::uint32_t cols = get_u32(in);
    if (rows > (1u << 20) || cols > (1u << 20)) {
        throw std::runtime_error("checkpoint: implausible tensor shape");
    }
    Matrix m(static_cast<int>(rows), static_cast<int>(cols));
    in.read(reinterpret_cast<char*>(m.data.data()),
            static_cast<std::streamsize>(m.data.size() * sizeof(double)));
    if (!in) throw std::runtime_error("checkpoint: truncated file");
    return m;
}

}  // namespace

void save_checkpoint(const Checkpoint& ck, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("checkpoint: cannot open for writing: " + path);
    out.write(kMagic, sizeof kMagic);

    const ModelConfig& cfg = ck.params.cfg;
    const std::vector<std::pair<std::string, double>> attrs = {
        {"d_f", static_cast<double>(cfg.d_f)},
        {"d_h", static_cast<double>(cfg.d_h)},
        {"heads", static_cast<double>(cfg.heads)},
        {"layers", static_cast<double>(cfg.layers)},
        {"use_ddformer", cfg.use_ddformer ? 1.0 : 0.0},
        {"attention_readout", cfg.attention_readout ? 1.0 : 0.0},
    };
    put_u32(out, static_cast<std::uint32_t>(attrs.size()));
    for (const auto& [name, value] : attrs) {
        put_string(out, name);
        put_f64(out, value);
    }

    const auto roster = ck.params.roster();
    put_u32(out, static_cast<std::uint32_t>(roster.size()));
    for (const auto& [name, mat] : roster) put_matrix(out, name, *mat);

    out.put(ck.has_adam ? '\1' : '\0');
    if (ck.has_adam) {
        if (ck.adam_m.size() != roster.size() || ck.adam_v.size() != roster.size()) {
            throw std::invalid_argument("checkpoint: optimizer moments misaligned with roster");
        }
        put_i64(out, ck.adam_step);
        for (std::size_t i = 0; i < roster.size(); ++i) {
            put_matrix(out, roster[i].first + ".m", ck.adam_m[i]);
            put_matrix(out, roster[i].first + ".v", ck.adam_v[i]);
        }
    }
    if (!out) throw std::runtime_error("checkpoint: write failed: " + path);
}

Checkpoint load_checkpoint(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("checkpoint: cannot open for reading: " + path);
    char magic[8];
    in.read(magic, sizeof magic);
    if (!in || std::memcmp(magic, kMagic, sizeof kMagic) != 0) {
        throw std::runtime_error("checkpoint: bad magic, not a checkpoint file");
    }

    std::map<std::string, double> attrs;
    const std::uint32_t n_attrs = get_u32(in);
    for (std::uint32_t i = 0; i < n_attrs; ++i) {
        std::string name = get_string(in);
        attrs[name] = get_f64(in);
    }
    auto attr = [&](const char* name) {
        auto it = attrs.find(name);
        if (it == attrs.end()) {
            throw std::runtime_error(std::string("checkpoint: missing attribute ") + name);
        }
        return it->second;
    };
    ModelConfig cfg;
    cfg.d_f = static_cast<int>(attr("d_f"));
    cfg.d_h = static_cast<int>(attr("d_h"));
    cfg.heads = static_cast<int>(attr("heads"));
    cfg.layers = static_cast<int>(attr("layers"));
    cfg.use_ddformer = attr("use_ddformer") != 0.0;
    cfg.attention_readout = attr("attention_readout") != 0.0;

    Checkpoint ck;
    ck.params = ModelParams::init(cfg, 0);

    std::map<std::string, Matrix> tensors;
    const std::uint32_t n_tensors = get_u32(in);
    for (std::uint32_t i = 0; i < n_tensors; ++i) {
        std::string name = get_string(in);
        tensors[name] = get_matrix_body(in);
    }
    auto roster = ck.params.roster();
    if (tensors.size() != roster.size()) {
        throw std::runtime_error("checkpoint: tensor count does not match the model layout");
    }
    for (auto& [name, mat] : roster) {
        auto it = tensors.find(name);
        if (it == tensors.end()) {
            throw std::runtime_error("checkpoint: missing tensor " + name);
        }
        if (it->second.rows != mat->rows || it->second.cols != mat->cols) {
            throw std::runtime_error("checkpoint: shape mismatch for tensor " + name);
        }
        *mat = std::move(it->second);
    }

    const int flag = in.get();
    if (flag == std::istream::traits_type::eof()) {
        throw std::runtime_error("checkpoint: truncated file");
    }
    ck.has_adam = flag != 0;
    if (ck.has_adam) {
        ck.adam_step = static_cast<long>(get_i64(in));
        for (const auto& [name, mat] : roster) {
            std::string mname = get_string(in);
            if (mname != name + ".m") throw std::runtime_error("checkpoint: moment order broken");
            Matrix m = get_matrix_body(in);
            std::string vname = get_string(in);
            if (vname != name + ".v") throw std::runtime_error("checkpoint: moment order broken");
            Matrix v = get_matrix_body(in);
            if (m.rows != mat->rows || m.cols != mat->cols || v.rows != mat->rows ||
                v.cols != mat->cols) {
                throw std::runtime_error("checkpoint: moment shape mismatch for " + name);
            }
            ck.adam_m.push_back(std::move(m));
            ck.adam_v.push_back(std::move(v));
        }
    }
    return ck;
}

}  // namespace phgcl
