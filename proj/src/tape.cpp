#include "phgcl/tape.hpp"

#include "phgcl/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>

namespace phgcl {

namespace {

std::string shape_of(const Matrix& m) {
    return "[" + std::to_string(m.rows) + "x" + std::to_string(m.cols) + "]";
}

void require_same_shape(const char* op, const Matrix& a, const Matrix& b) {
    if (a.rows != b.rows || a.cols != b.cols) {
        throw std::invalid_argument(std::string(op) + ": shapes differ: " + shape_of(a) + " vs " +
                                    shape_of(b));
    }
}

void require_rowvec(const char* op, const Matrix& a, const Matrix& v) {
    if (v.rows != 1 || v.cols != a.cols) {
        throw std::invalid_argument(std::string(op) + ": broadcast vector must be [1x" +
                                    std::to_string(a.cols) + "], got " + shape_of(v));
    }
}

double stable_sigmoid(double x) {
    if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
    const double e = std::exp(x);
    return e / (1.0 + e);
}

}  // namespace

int Tape::check(Var v) const {
    if (v.id < 0 || v.id >= static_cast<int>(nodes_.size())) {
        throw std::invalid_argument("tape: variable does not belong to this tape");
    }
    return v.id;
}

Var Tape::emit(Matrix value, bool requires_grad) {
    Node n;
    n.value = std::move(value);
    n.requires_grad = requires_grad;
    nodes_.push_back(std::move(n));
    return Var{static_cast<int>(nodes_.size()) - 1};
}

void Tape::attach(Var out, std::function<void(Tape&)> pull) {
    Node& n = nodes_[static_cast<std::size_t>(out.id)];
    if (n.requires_grad) n.pull = std::move(pull);
}

void Tape::accumulate(int id, const Matrix& g) {
    Node& n = nodes_[static_cast<std::size_t>(id)];
    if (!n.requires_grad) return;
    if (n.grad.rows == 0) n.grad = Matrix(n.value.rows, n.value.cols);
    for (std::size_t i = 0; i < g.data.size(); ++i) n.grad.data[i] += g.data[i];
}

Var Tape::input(Matrix value, bool requires_grad) { return emit(std::move(value), requires_grad); }

const Matrix& Tape::value(Var v) const { return nodes_[static_cast<std::size_t>(check(v))].value; }

bool Tape::has_grad(Var v) const {
    return nodes_[static_cast<std::size_t>(check(v))].grad.rows != 0;
}

const Matrix& Tape::grad(Var v) const {
    const Node& n = nodes_[static_cast<std::size_t>(check(v))];
    if (n.grad.rows == 0) {
        throw std::logic_error("tape: gradient was never accumulated for this variable");
    }
    return n.grad;
}

void Tape::backward(Var out) {
    const int id = check(out);
    if (swept_) throw std::logic_error("tape: backward may run only once");
    Node& last = nodes_[static_cast<std::size_t>(id)];
    if (last.value.rows != 1 || last.value.cols != 1) {
        throw std::invalid_argument("tape: backward needs a 1x1 output, got " +
                                    shape_of(last.value));
    }
    swept_ = true;
    if (!last.requires_grad) return;
    last.grad = Matrix(1, 1);
    last.grad.at(0, 0) = 1.0;
    for (int i = id; i >= 0; --i) {
        Node& n = nodes_[static_cast<std::size_t>(i)];
        if (n.pull && n.grad.rows != 0) n.pull(*this);
    }
}

Var Tape::matmul(Var a, Var b) {
    const int ia = check(a), ib = check(b);
    Var o = emit(mat_mul(val(ia), val(ib)), wants_grad(a) || wants_grad(b));
    attach(o, [ia, ib, io = o.id](Tape& t) {
        const Matrix& g = t.grad_of(io);
        if (t.nodes_[ia].requires_grad) t.accumulate(ia, mat_mul(g, mat_transpose(t.val(ib))));
        if (t.nodes_[ib].requires_grad) t.accumulate(ib, mat_mul(mat_transpose(t.val(ia)), g));
    });
    return o;
}

Var Tape::add(Var a, Var b) {
    const int ia = check(a), ib = check(b);
    require_same_shape("add", val(ia), val(ib));
    Matrix out = val(ia);
    for (std::size_t i = 0; i < out.data.size(); ++i) out.data[i] += val(ib).data[i];
    Var o = emit(std::move(out), wants_grad(a) || wants_grad(b));
    attach(o, [ia, ib, io = o.id](Tape& t) {
        t.accumulate(ia, t.grad_of(io));
        t.accumulate(ib, t.grad_of(io));
    });
    return o;
}

Var Tape::sub(Var a, Var b) {
    const int ia = check(a), ib = check(b);
    require_same_shape("sub", val(ia), val(ib));
    Matrix out = val(ia);
    for (std::size_t i = 0; i < out.data.size(); ++i) out.data[i] -= val(ib).data[i];
    Var o = emit(std::move(out), wants_grad(a) || wants_grad(b));
    attach(o, [ia, ib, io = o.id](Tape& t) {
        const Matrix& g = t.grad_of(io);
        t.accumulate(ia, g);
        if (t.nodes_[ib].requires_grad) {
            Matrix neg = g;
            for (double& x : neg.data) x = -x;
            t.accumulate(ib, neg);
        }
    });
    return o;
}

Var Tape::mul(Var a, Var b) {
    const int ia = check(a), ib = check(b);
    require_same_shape("mul", val(ia), val(ib));
    Matrix out = val(ia);
    for (std::size_t i = 0; i < out.data.size(); ++i) out.data[i] *= val(ib).data[i];
    Var o = emit(std::move(out), wants_grad(a) || wants_grad(b));
    attach(o, [ia, ib, io = o.id](Tape& t) {
        const Matrix& g = t.grad_of(io);
        if (t.nodes_[ia].requires_grad) {
            Matrix da = g;
            for (std::size_t i = 0; i < da.data.size(); ++i) da.data[i] *= t.val(ib).data[i];
            t.accumulate(ia, da);
        }
        if (t.nodes_[ib].requires_grad) {
            Matrix db = g;
            for (std::size_t i = 0; i < db.data.size(); ++i) db.data[i] *= t.val(ia).data[i];
            t.accumulate(ib, db);
        }
    });
    return o;
}

Var Tape::affine(Var a, double k, double c) {
    const int ia = check(a);
    Matrix out = val(ia);
    for (double& x : out.data) x = k * x + c;
    Var o = emit(std::move(out), wants_grad(a));
    attach(o, [ia, k, io = o.id](Tape& t) {
        Matrix da = t.grad_of(io);
        for (double& x : da.data) x *= k;
        t.accumulate(ia, da);
    });
    return o;
}

Var Tape::add_rowvec(Var a, Var v) {
    const int ia = check(a), iv = check(v);
    require_rowvec("add_rowvec", val(ia), val(iv));
    Matrix out = val(ia);
    for (int i = 0; i < out.rows; ++i) {
        for (int j = 0; j < out.cols; ++j) out.at(i, j) += val(iv).at(0, j);
    }
    Var o = emit(std::move(out), wants_grad(a) || wants_grad(v));
    attach(o, [ia, iv, io = o.id](Tape& t) {
        const Matrix& g = t.grad_of(io);
        t.accumulate(ia, g);
        if (t.nodes_[iv].requires_grad) {
            Matrix dv(1, g.cols);
            for (int i = 0; i < g.rows; ++i) {
                for (int j = 0; j < g.cols; ++j) dv.at(0, j) += g.at(i, j);
            }
            t.accumulate(iv, dv);
        }
    });
    return o;
}

Var Tape::mul_rowvec(Var a, Var v) {
    const int ia = check(a), iv = check(v);
    require_rowvec("mul_rowvec", val(ia), val(iv));
    Matrix out = val(ia);
    for (int i = 0; i < out.rows; ++i) {
        for (int j = 0; j < out.cols; ++j) out.at(i, j) *= val(iv).at(0, j);
    }
    Var o = emit(std::move(out), wants_grad(a) || wants_grad(v));
    attach(o, [ia, iv, io = o.id](Tape& t) {
        const Matrix& g = t.grad_of(io);
        if (t.nodes_[ia].requires_grad) {
            Matrix da = g;
            for (int i = 0; i < da.rows; ++i) {
                for (int j = 0; j < da.cols; ++j) da.at(i, j) *= t.val(iv).at(0, j);
            }
            t.accumulate(ia, da);
        }
        if (t.nodes_[iv].requires_grad) {
            Matrix dv(1, g.cols);
            for (int i = 0; i < g.rows; ++i) {
                for (int j = 0; j < g.cols; ++j) dv.at(0, j) += g.at(i, j) * t.val(ia).at(i, j);
            }
            t.accumulate(iv, dv);
        }
    });
    return o;
}

Var Tape::transpose(Var a) {
    const int ia = check(a);
    Var o = emit(mat_transpose(val(ia)), wants_grad(a));
    attach(o, [ia, io = o.id](Tape& t) { t.accumulate(ia, mat_transpose(t.grad_of(io))); });
    return o;
}

Var Tape::concat_rows(const std::vector<Var>& parts) {
    if (parts.empty()) throw std::invalid_argument("concat_rows: no parts");
    std::vector<int> ids;
    ids.reserve(parts.size());
    int rows = 0;
    const int cols = val(check(parts[0])).cols;
    bool rg = false;
    for (Var p : parts) {
        const int ip = check(p);
        if (val(ip).cols != cols) {
            throw std::invalid_argument("concat_rows: column counts differ");
        }
        rows += val(ip).rows;
        rg = rg || wants_grad(p);
        ids.push_back(ip);
    }
    Matrix out(rows, cols);
    int r = 0;
    for (int ip : ids) {
        const Matrix& m = val(ip);
        std::copy(m.data.begin(), m.data.end(),
                  out.data.begin() + static_cast<std::ptrdiff_t>(r) * cols);
        r += m.rows;
    }
    Var o = emit(std::move(out), rg);
    attach(o, [ids, io = o.id](Tape& t) {
        const Matrix& g = t.grad_of(io);
        int row = 0;
        for (int ip : ids) {
            const Matrix& m = t.val(ip);
            if (t.nodes_[ip].requires_grad) {
                Matrix slice(m.rows, m.cols);
                std::copy(g.data.begin() + static_cast<std::ptrdiff_t>(row) * g.cols,
                          g.data.begin() + static_cast<std::ptrdiff_t>(row + m.rows) * g.cols,
                          slice.data.begin());
                t.accumulate(ip, slice);
            }
            row += m.rows;
        }
    });
    return o;
}

Var Tape::concat_cols(const std::vector<Var>& parts) {
    if (parts.empty()) throw std::invalid_argument("concat_cols: no parts");
    std::vector<int> ids;
    ids.reserve(parts.size());
    const int rows = val(check(parts[0])).rows;
    int cols = 0;
    bool rg = false;
    for (Var p : parts) {
        const int ip = check(p);
        if (val(ip).rows != rows) {
            throw std::invalid_argument("concat_cols: row counts differ");
        }
        cols += val(ip).cols;
        rg = rg || wants_grad(p);
        ids.push_back(ip);
    }
    Matrix out(rows, cols);
    int c = 0;
    for (int ip : ids) {
        const Matrix& m = val(ip);
        for (int i = 0; i < rows; ++i) {
            for (int j = 0; j < m.cols; ++j) out.at(i, c + j) = m.at(i, j);
        }
        c += m.cols;
    }
    Var o = emit(std::move(out), rg);
    attach(o, [ids, io = o.id](Tape& t) {
        const Matrix& g = t.grad_of(io);
        int col = 0;
        for (int ip : ids) {
            const Matrix& m = t.val(ip);
            if (t.nodes_[ip].requires_grad) {
                Matrix slice(m.rows, m.cols);
                for (int i = 0; i < m.rows; ++i) {
                    for (int j = 0; j < m.cols; ++j) slice.at(i, j) = g.at(i, col + j);
                }
                t.accumulate(ip, slice);
            }
            col += m.cols;
        }
    });
    return o;
}

Var Tape::select_rows(Var a, std::vector<int> rows) {
    const int ia = check(a);
    const Matrix& m = val(ia);
    for (int r : rows) {
        if (r < 0 || r >= m.rows) {
            throw std::invalid_argument("select_rows: row index out of range");
        }
    }
    Matrix out(static_cast<int>(rows.size()), m.cols);
    for (std::size_t k = 0; k < rows.size(); ++k) {
        for (int j = 0; j < m.cols; ++j) out.at(static_cast<int>(k), j) = m.at(rows[k], j);
    }
    Var o = emit(std::move(out), wants_grad(a));
    attach(o, [ia, rows = std::move(rows), io = o.id](Tape& t) {
        const Matrix& g = t.grad_of(io);
        Matrix da(t.val(ia).rows, t.val(ia).cols);
        for (std::size_t k = 0; k < rows.size(); ++k) {
            for (int j = 0; j < g.cols; ++j) da.at(rows[k], j) += g.at(static_cast<int>(k), j);
        }
        t.accumulate(ia, da);
    });
    return o;
}

Var Tape::mean_rows(Var a) {
    const int ia = check(a);
    const Matrix& m = val(ia);
    if (m.rows == 0) throw std::invalid_argument("mean_rows: empty input");
    Matrix out(1, m.cols);
    for (int i = 0; i < m.rows; ++i) {
        for (int j = 0; j < m.cols; ++j) out.at(0, j) += m.at(i, j);
    }
    for (double& x : out.data) x /= m.rows;
    Var o = emit(std::move(out), wants_grad(a));
    attach(o, [ia, io = o.id](Tape& t) {
        const Matrix& g = t.grad_of(io);
        const Matrix& m2 = t.val(ia);
        Matrix da(m2.rows, m2.cols);
        for (int i = 0; i < m2.rows; ++i) {
            for (int j = 0; j < m2.cols; ++j) da.at(i, j) = g.at(0, j) / m2.rows;
        }
        t.accumulate(ia, da);
    });
    return o;
}

Var Tape::sum_all(Var a) {
    const int ia = check(a);
    Matrix out(1, 1);
    for (double x : val(ia).data) out.at(0, 0) += x;
    Var o = emit(std::move(out), wants_grad(a));
    attach(o, [ia, io = o.id](Tape& t) {
        const double s = t.grad_of(io).at(0, 0);
        Matrix da(t.val(ia).rows, t.val(ia).cols);
        for (double& x : da.data) x = s;
        t.accumulate(ia, da);
    });
    return o;
}

Var Tape::sigmoid(Var a) {
    const int ia = check(a);
    Matrix out = val(ia);
    for (double& x : out.data) x = stable_sigmoid(x);
    Var o = emit(std::move(out), wants_grad(a));
    attach(o, [ia, io = o.id](Tape& t) {
        const Matrix& g = t.grad_of(io);
        const Matrix& y = t.val(io);
        Matrix da = g;
        for (std::size_t i = 0; i < da.data.size(); ++i) {
            da.data[i] *= y.data[i] * (1.0 - y.data[i]);
        }
        t.accumulate(ia, da);
    });
    return o;
}

Var Tape::relu(Var a) {
    const int ia = check(a);
    Matrix out = val(ia);
    for (double& x : out.data) x = x > 0.0 ? x : 0.0;
    Var o = emit(std::move(out), wants_grad(a));
    attach(o, [ia, io = o.id](Tape& t) {
        Matrix da = t.grad_of(io);
        const Matrix& x = t.val(ia);
        for (std::size_t i = 0; i < da.data.size(); ++i) {
            if (x.data[i] <= 0.0) da.data[i] = 0.0;
        }
        t.accumulate(ia, da);
    });
    return o;
}

Var Tape::log(Var a) {
    const int ia = check(a);
    Matrix out = val(ia);
    for (double& x : out.data) {
        if (!(x > 0.0)) throw std::invalid_argument("log: input must be positive");
        x = std::log(x);
    }
    Var o = emit(std::move(out), wants_grad(a));
    attach(o, [ia, io = o.id](Tape& t) {
        Matrix da = t.grad_of(io);
        const Matrix& x = t.val(ia);
        for (std::size_t i = 0; i < da.data.size(); ++i) da.data[i] /= x.data[i];
        t.accumulate(ia, da);
    });
    return o;
}

Var Tape::exp(Var a) {
    const int ia = check(a);
    Matrix out = val(ia);
    for (double& x : out.data) x = std::exp(x);
    Var o = emit(std::move(out), wants_grad(a));
    attach(o, [ia, io = o.id](Tape& t) {
        Matrix da = t.grad_of(io);
        const Matrix& y = t.val(io);
        for (std::size_t i = 0; i < da.data.size(); ++i) da.data[i] *= y.data[i];
        t.accumulate(ia, da);
    });
    return o;
}

Var Tape::clamp(Var a, double lo, double hi) {
    if (!(lo <= hi)) throw std::invalid_argument("clamp: lo must not exceed hi");
    const int ia = check(a);
    Matrix out = val(ia);
    for (double& x : out.data) x = std::min(std::max(x, lo), hi);
    Var o = emit(std::move(out), wants_grad(a));
    attach(o, [ia, lo, hi, io = o.id](Tape& t) {
        Matrix da = t.grad_of(io);
        const Matrix& x = t.val(ia);
        for (std::size_t i = 0; i < da.data.size(); ++i) {
            if (x.data[i] < lo || x.data[i] > hi) da.data[i] = 0.0;
        }
        t.accumulate(ia, da);
    });
    return o;
}

Var Tape::softmax_rows(Var a) {
    const int ia = check(a);
    const Matrix& m = val(ia);
    Matrix out(m.rows, m.cols);
    for (int i = 0; i < m.rows; ++i) {
        double mx = -std::numeric_limits<double>::infinity();
        for (int j = 0; j < m.cols; ++j) mx = std::max(mx, m.at(i, j));
        double z = 0.0;
        for (int j = 0; j < m.cols; ++j) {
            out.at(i, j) = std::exp(m.at(i, j) - mx);
            z += out.at(i, j);
        }
        for (int j = 0; j < m.cols; ++j) out.at(i, j) /= z;
    }
    Var o = emit(std::move(out), wants_grad(a));
    attach(o, [ia, io = o.id](Tape& t) {
        const Matrix& g = t.grad_of(io);
        const Matrix& y = t.val(io);
        Matrix da(g.rows, g.cols);
        for (int i = 0; i < g.rows; ++i) {
            double dot = 0.0;
            for (int j = 0; j < g.cols; ++j) dot += g.at(i, j) * y.at(i, j);
            for (int j = 0; j < g.cols; ++j) {
                da.at(i, j) = y.at(i, j) * (g.at(i, j) - dot);
            }
        }
        t.accumulate(ia, da);
    });
    return o;
}

Var Tape::masked_softmax_rows(Var logits, const Matrix& mult_mask, const Matrix& include) {
    const int ia = check(logits);
    const Matrix& s = val(ia);
    require_same_shape("masked_softmax_rows(mask)", s, mult_mask);
    require_same_shape("masked_softmax_rows(include)", s, include);

    Matrix out(s.rows, s.cols);
    for (int i = 0; i < s.rows; ++i) {
        double mx = -std::numeric_limits<double>::infinity();
        for (int j = 0; j < s.cols; ++j) {
            if (include.at(i, j) != 0.0) mx = std::max(mx, s.at(i, j) * mult_mask.at(i, j));
        }
        if (mx == -std::numeric_limits<double>::infinity()) continue;  // row fully excluded
        double z = 0.0;
        for (int j = 0; j < s.cols; ++j) {
            if (include.at(i, j) != 0.0) {
                out.at(i, j) = std::exp(s.at(i, j) * mult_mask.at(i, j) - mx);
                z += out.at(i, j);
            }
        }
        for (int j = 0; j < s.cols; ++j) out.at(i, j) /= z;
    }
    Var o = emit(std::move(out), wants_grad(logits));
    attach(o, [ia, mult_mask, include, io = o.id](Tape& t) {
        const Matrix& g = t.grad_of(io);
        const Matrix& y = t.val(io);
        Matrix da(g.rows, g.cols);
        for (int i = 0; i < g.rows; ++i) {
            double dot = 0.0;
            for (int j = 0; j < g.cols; ++j) dot += g.at(i, j) * y.at(i, j);
            for (int j = 0; j < g.cols; ++j) {
                if (include.at(i, j) == 0.0) continue;
                da.at(i, j) = mult_mask.at(i, j) * y.at(i, j) * (g.at(i, j) - dot);
            }
        }
        t.accumulate(ia, da);
    });
    return o;
}

Var Tape::layer_norm_rows(Var a, Var gamma, Var beta, double eps) {
    const int ia = check(a), ig = check(gamma), ib = check(beta);
    const Matrix& m = val(ia);
    require_rowvec("layer_norm_rows(gamma)", m, val(ig));
    require_rowvec("layer_norm_rows(beta)", m, val(ib));
    if (m.cols == 0) throw std::invalid_argument("layer_norm_rows: empty rows");

    Matrix xhat(m.rows, m.cols);
    std::vector<double> inv_std(static_cast<std::size_t>(m.rows));
    Matrix out(m.rows, m.cols);
    for (int i = 0; i < m.rows; ++i) {
        double mean = 0.0;
        for (int j = 0; j < m.cols; ++j) mean += m.at(i, j);
        mean /= m.cols;
        double var = 0.0;
        for (int j = 0; j < m.cols; ++j) {
            const double d = m.at(i, j) - mean;
            var += d * d;
        }
        var /= m.cols;
        const double istd = 1.0 / std::sqrt(var + eps);
        inv_std[static_cast<std::size_t>(i)] = istd;
        for (int j = 0; j < m.cols; ++j) {
            xhat.at(i, j) = (m.at(i, j) - mean) * istd;
            out.at(i, j) = val(ig).at(0, j) * xhat.at(i, j) + val(ib).at(0, j);
        }
    }
    Var o = emit(std::move(out), wants_grad(a) || wants_grad(gamma) || wants_grad(beta));
    attach(o, [ia, ig, ib, xhat = std::move(xhat), inv_std = std::move(inv_std),
               io = o.id](Tape& t) {
        const Matrix& g = t.grad_of(io);
        const int rows = g.rows, cols = g.cols;
        if (t.nodes_[ig].requires_grad) {
            Matrix dgamma(1, cols);
            for (int i = 0; i < rows; ++i) {
                for (int j = 0; j < cols; ++j) dgamma.at(0, j) += g.at(i, j) * xhat.at(i, j);
            }
            t.accumulate(ig, dgamma);
        }
        if (t.nodes_[ib].requires_grad) {
            Matrix dbeta(1, cols);
            for (int i = 0; i < rows; ++i) {
                for (int j = 0; j < cols; ++j) dbeta.at(0, j) += g.at(i, j);
            }
            t.accumulate(ib, dbeta);
        }
        if (t.nodes_[ia].requires_grad) {
            const Matrix& gam = t.val(ig);
            Matrix da(rows, cols);
            for (int i = 0; i < rows; ++i) {
                double mean_dx = 0.0, mean_dx_xhat = 0.0;
                for (int j = 0; j < cols; ++j) {
                    const double dxh = g.at(i, j) * gam.at(0, j);
                    mean_dx += dxh;
                    mean_dx_xhat += dxh * xhat.at(i, j);
                }
                mean_dx /= cols;
                mean_dx_xhat /= cols;
                for (int j = 0; j < cols; ++j) {
                    const double dxh = g.at(i, j) * gam.at(0, j);
                    da.at(i, j) = inv_std[static_cast<std::size_t>(i)] *
                                  (dxh - mean_dx - xhat.at(i, j) * mean_dx_xhat);
                }
            }
            t.accumulate(ia, da);
        }
    });
    return o;
}

Var Tape::l2_normalize_rows(Var a) {
    const int ia = check(a);
    const Matrix& m = val(ia);
    Matrix out(m.rows, m.cols);
    std::vector<double> norms(static_cast<std::size_t>(m.rows));
    for (int i = 0; i < m.rows; ++i) {
        double sq = 0.0;
        for (int j = 0; j < m.cols; ++j) sq += m.at(i, j) * m.at(i, j);
        const double r = std::sqrt(sq);
        norms[static_cast<std::size_t>(i)] = r;
        if (r == 0.0) continue;
        for (int j = 0; j < m.cols; ++j) out.at(i, j) = m.at(i, j) / r;
    }
    Var o = emit(std::move(out), wants_grad(a));
    attach(o, [ia, norms = std::move(norms), io = o.id](Tape& t) {
        const Matrix& g = t.grad_of(io);
        const Matrix& y = t.val(io);
        Matrix da(g.rows, g.cols);
        for (int i = 0; i < g.rows; ++i) {
            const double r = norms[static_cast<std::size_t>(i)];
            if (r == 0.0) continue;
            double dot = 0.0;
            for (int j = 0; j < g.cols; ++j) dot += g.at(i, j) * y.at(i, j);
            for (int j = 0; j < g.cols; ++j) {
                da.at(i, j) = (g.at(i, j) - y.at(i, j) * dot) / r;
            }
        }
        t.accumulate(ia, da);
    });
    return o;
}

}  // namespace phgcl
