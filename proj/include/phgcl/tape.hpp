#pragma once

#include "phgcl/matrix.hpp"

#include <deque>
#include <functional>
#include <vector>

namespace phgcl {

// Handle into a Tape. Only valid for the tape that produced it.
struct Var {
    int id = -1;
};

// Reverse-mode differentiation over 2-D double matrices. Each op records a
// node holding the forward value and a closure that pushes the node's
// gradient into its inputs. Gradients are allocated lazily, so forward-only
// evaluation pays nothing for them, and backward skips nodes the loss never
// touched. A tape is single-threaded and lives for one forward/backward.
class Tape {
  public:
    Var input(Matrix value, bool requires_grad = false);
    Var constant(Matrix value) { return input(std::move(value), false); }

    Var matmul(Var a, Var b);
    Var add(Var a, Var b);
    Var sub(Var a, Var b);
    Var mul(Var a, Var b);
    Var affine(Var a, double k, double c);  // elementwise k*a + c
    Var scale(Var a, double k) { return affine(a, k, 0.0); }
    Var add_rowvec(Var a, Var v);  // v broadcast over rows of a
    Var mul_rowvec(Var a, Var v);
    Var transpose(Var a);
    Var concat_rows(const std::vector<Var>& parts);
    Var concat_cols(const std::vector<Var>& parts);
    Var select_rows(Var a, std::vector<int> rows);
    Var mean_rows(Var a);  // [m x n] -> [1 x n]
    Var sum_all(Var a);    // [m x n] -> [1 x 1]
    Var sigmoid(Var a);
    Var relu(Var a);
    Var log(Var a);
    Var exp(Var a);
    Var clamp(Var a, double lo, double hi);
    Var softmax_rows(Var a);
    // Multiplies logits elementwise by mult_mask, then normalizes each row
    // over the entries where include != 0; excluded entries come out 0 and
    // receive no gradient. A row with nothing included comes out all zero.
    Var masked_softmax_rows(Var logits, const Matrix& mult_mask, const Matrix& include);
    Var layer_norm_rows(Var a, Var gamma, Var beta, double eps = 1e-5);
    // Rows scaled to unit L2 norm; an exactly zero row stays zero and
    // passes no gradient.
    Var l2_normalize_rows(Var a);

    const Matrix& value(Var v) const;
    bool has_grad(Var v) const;
    const Matrix& grad(Var v) const;

    // Seeds d(out)/d(out) = 1 for a 1x1 output and sweeps the tape in
    // reverse. May be called once per tape.
    void backward(Var out);

    std::size_t size() const { return nodes_.size(); }

  private:
    struct Node {
        Matrix value;
        Matrix grad;  // zero-sized until first accumulation
        bool requires_grad = false;
        std::function<void(Tape&)> pull;
    };

    // deque keeps references from value()/grad() stable while ops are added
    std::deque<Node> nodes_;
    bool swept_ = false;

    int check(Var v) const;
    Var emit(Matrix value, bool requires_grad);
    void attach(Var out, std::function<void(Tape&)> pull);
    void accumulate(int id, const Matrix& g);
    bool wants_grad(Var v) const { return nodes_[static_cast<std::size_t>(v.id)].requires_grad; }
    const Matrix& val(int id) const { return nodes_[static_cast<std::size_t>(id)].value; }
    const Matrix& grad_of(int id) const { return nodes_[static_cast<std::size_t>(id)].grad; }
};

}  // namespace phgcl
