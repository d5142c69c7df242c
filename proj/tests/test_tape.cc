// tests/test_tape.cc

// Finite-difference validation of every tape op and layer primitive.

#include <cmath>
#include <functional>
#include <vector>

#include "doctest.h"
#include "sas/nn/layers.h"
#include "sas/nn/tape.h"
#include "sas/rng.h"

using sas::Mat;
using sas::Rng;
namespace nn = sas::nn;

namespace {

double rel_err(double a, double f) {
  return std::abs(a - f) / std::max({1.0, std::abs(a), std::abs(f)});
}

// Rebuilds the graph from scratch for every probe, so the builder must be a
// pure function of the param values.
double fd_max_rel_err(std::vector<nn::Param*> params,
                      const std::function<int(nn::Tape&)>& build,
                      double eps = 1e-5) {
  nn::Tape t;
  int root = build(t);
  REQUIRE(t.value(root).rows() == 1);
  REQUIRE(t.value(root).cols() == 1);
  for (auto* p : params) p->zero_grad();
  t.backward(root);
  std::vector<Mat> analytic;
  for (auto* p : params) analytic.push_back(p->grad);

  double worst = 0.0;
  for (size_t pi = 0; pi < params.size(); ++pi) {
    Mat& v = params[pi]->value;
    for (Eigen::Index i = 0; i < v.rows(); ++i) {
      for (Eigen::Index j = 0; j < v.cols(); ++j) {
        double orig = v(i, j);
        v(i, j) = orig + eps;
        nn::Tape tp;
        double fp = tp.value(build(tp))(0, 0);
        v(i, j) = orig - eps;
        nn::Tape tm;
        double fm = tm.value(build(tm))(0, 0);
        v(i, j) = orig;
        double fd = (fp - fm) / (2.0 * eps);
        worst = std::max(worst, rel_err(analytic[pi](i, j), fd));
      }
    }
  }
  return worst;
}

nn::Param make_param(const std::string& name, int rows, int cols,
                     Rng& rng, double scale = 1.0) {
  nn::Param p;
  p.name = name;
  p.value = rng.normal_matrix(rows, cols, scale);
  return p;
}

// Weighted sum against a fixed random matrix; catches transposed gradients
// that a plain sum would miss.
int weighted_sum(nn::Tape& t, int node, const Mat& w) {
  return t.sum(t.mul_const(node, w));
}

constexpr double kTol = 1e-6;

}  // namespace

TEST_CASE("tape matmul gradient") {
  Rng rng(101);
  auto a = make_param("a", 3, 4, rng);
  auto b = make_param("b", 4, 5, rng);
  Mat w = rng.normal_matrix(3, 5, 1.0);
  auto build = [&](nn::Tape& t) {
    return weighted_sum(t, t.matmul(t.param(a), t.param(b)), w);
  };
  CHECK(fd_max_rel_err({&a, &b}, build) < kTol);
}

TEST_CASE("tape transpose gradient") {
  Rng rng(102);
  auto a = make_param("a", 3, 4, rng);
  Mat w = rng.normal_matrix(4, 3, 1.0);
  auto build = [&](nn::Tape& t) {
    return weighted_sum(t, t.transpose(t.param(a)), w);
  };
  CHECK(fd_max_rel_err({&a}, build) < kTol);
}

TEST_CASE("tape add sub mul scale gradients") {
  Rng rng(103);
  auto a = make_param("a", 3, 4, rng);
  auto b = make_param("b", 3, 4, rng);
  Mat w = rng.normal_matrix(3, 4, 1.0);
  auto build = [&](nn::Tape& t) {
    int s = t.add(t.param(a), t.param(b));
    int d = t.sub(s, t.mul(t.param(a), t.param(b)));
    return weighted_sum(t, t.scale(d, 1.7), w);
  };
  CHECK(fd_max_rel_err({&a, &b}, build) < kTol);
}

TEST_CASE("tape add_rowvec gradient") {
  Rng rng(104);
  auto a = make_param("a", 5, 3, rng);
  auto b = make_param("b", 1, 3, rng);
  Mat w = rng.normal_matrix(5, 3, 1.0);
  auto build = [&](nn::Tape& t) {
    return weighted_sum(t, t.add_rowvec(t.param(a), t.param(b)), w);
  };
  CHECK(fd_max_rel_err({&a, &b}, build) < kTol);
}

TEST_CASE("tape mul_const gradient") {
  Rng rng(105);
  auto a = make_param("a", 4, 4, rng);
  Mat m = rng.normal_matrix(4, 4, 1.0);
  auto build = [&](nn::Tape& t) { return t.sum(t.mul_const(t.param(a), m)); };
  CHECK(fd_max_rel_err({&a}, build) < kTol);
}

TEST_CASE("tape hcat vcat gradients") {
  Rng rng(106);
  auto a = make_param("a", 3, 2, rng);
  auto b = make_param("b", 3, 4, rng);
  auto c = make_param("c", 3, 1, rng);
  Mat wh = rng.normal_matrix(3, 7, 1.0);
  auto build_h = [&](nn::Tape& t) {
    return weighted_sum(t, t.hcat({t.param(a), t.param(b), t.param(c)}), wh);
  };
  CHECK(fd_max_rel_err({&a, &b, &c}, build_h) < kTol);

  auto d = make_param("d", 2, 3, rng);
  auto e = make_param("e", 4, 3, rng);
  Mat wv = rng.normal_matrix(6, 3, 1.0);
  auto build_v = [&](nn::Tape& t) {
    return weighted_sum(t, t.vcat({t.param(d), t.param(e)}), wv);
  };
  CHECK(fd_max_rel_err({&d, &e}, build_v) < kTol);
}

TEST_CASE("tape slice and reverse gradients") {
  Rng rng(107);
  auto a = make_param("a", 5, 6, rng);
  Mat w1 = rng.normal_matrix(5, 3, 1.0);
  Mat w2 = rng.normal_matrix(2, 6, 1.0);
  Mat w3 = rng.normal_matrix(5, 6, 1.0);
  auto build = [&](nn::Tape& t) {
    int p = t.param(a);
    int s1 = weighted_sum(t, t.slice_cols(p, 2, 3), w1);
    int s2 = weighted_sum(t, t.slice_rows(p, 1, 2), w2);
    int s3 = weighted_sum(t, t.reverse_rows(p), w3);
    return t.add(t.add(s1, s2), s3);
  };
  CHECK(fd_max_rel_err({&a}, build) < kTol);
}

TEST_CASE("tape elementwise nonlinearity gradients") {
  Rng rng(108);
  nn::Param a;
  a.name = "a";
  a.value = Mat(3, 4);
  for (Eigen::Index i = 0; i < 3; ++i)
    for (Eigen::Index j = 0; j < 4; ++j) {
      double v = rng.uniform(0.1, 1.5);
      a.value(i, j) = rng.bernoulli(0.5) ? v : -v;  // keep clear of relu kink
    }
  Mat w = rng.normal_matrix(3, 4, 1.0);
  auto build = [&](nn::Tape& t) {
    int p = t.param(a);
    int y = t.relu(p);
    y = t.add(y, t.tanh_(p));
    y = t.add(y, t.sigmoid(p));
    y = t.add(y, t.exp_(p));
    y = t.add(y, t.softplus(p));
    y = t.add(y, t.square(p));
    return weighted_sum(t, y, w);
  };
  CHECK(fd_max_rel_err({&a}, build) < kTol);
}

TEST_CASE("tape log gradient") {
  Rng rng(109);
  nn::Param a;
  a.name = "a";
  a.value = Mat(3, 3);
  for (Eigen::Index i = 0; i < 3; ++i)
    for (Eigen::Index j = 0; j < 3; ++j) a.value(i, j) = rng.uniform(0.5, 2.0);
  Mat w = rng.normal_matrix(3, 3, 1.0);
  auto build = [&](nn::Tape& t) {
    return weighted_sum(t, t.log_(t.param(a)), w);
  };
  CHECK(fd_max_rel_err({&a}, build) < kTol);
}

TEST_CASE("tape reductions gradients") {
  Rng rng(110);
  auto a = make_param("a", 4, 5, rng);
  Mat w = rng.normal_matrix(1, 5, 1.0);
  auto build = [&](nn::Tape& t) {
    int p = t.param(a);
    return t.add(t.sum(p), weighted_sum(t, t.mean_rows(p), w));
  };
  CHECK(fd_max_rel_err({&a}, build) < kTol);
}

TEST_CASE("tape softmax_rows value and gradient") {
  Rng rng(111);
  auto a = make_param("a", 4, 6, rng, 2.0);
  {
    nn::Tape t;
    int y = t.softmax_rows(t.param(a));
    const Mat& Y = t.value(y);
    for (Eigen::Index i = 0; i < Y.rows(); ++i) {
      CHECK(Y.row(i).sum() == doctest::Approx(1.0).epsilon(1e-12));
      CHECK(Y.row(i).minCoeff() > 0.0);
    }
  }
  Mat w = rng.normal_matrix(4, 6, 1.0);
  auto build = [&](nn::Tape& t) {
    return weighted_sum(t, t.softmax_rows(t.param(a)), w);
  };
  CHECK(fd_max_rel_err({&a}, build) < kTol);
}

TEST_CASE("tape logsumexp_rows masked value and gradient") {
  Rng rng(112);
  auto a = make_param("a", 3, 5, rng, 3.0);
  Mat mask = Mat::Zero(3, 5);
  mask(0, 0) = 1;
  mask(0, 3) = 1;
  mask(1, 1) = 1;
  mask(2, 0) = mask(2, 1) = mask(2, 2) = mask(2, 3) = mask(2, 4) = 1;
  {
    nn::Tape t;
    int y = t.logsumexp_rows(t.param(a), mask);
    const Mat& Y = t.value(y);
    double r0 = std::log(std::exp(a.value(0, 0)) + std::exp(a.value(0, 3)));
    CHECK(Y(0, 0) == doctest::Approx(r0).epsilon(1e-12));
    CHECK(Y(1, 0) == doctest::Approx(a.value(1, 1)).epsilon(1e-12));
  }
  Mat w = rng.normal_matrix(3, 1, 1.0);
  auto build = [&](nn::Tape& t) {
    return weighted_sum(t, t.logsumexp_rows(t.param(a), mask), w);
  };
  CHECK(fd_max_rel_err({&a}, build) < kTol);

  nn::Tape t;
  Mat empty_mask = Mat::Zero(3, 5);
  CHECK_THROWS_AS(t.logsumexp_rows(t.param(a), empty_mask), sas::SasError);
}

TEST_CASE("tape diag gradient") {
  Rng rng(113);
  auto a = make_param("a", 4, 4, rng);
  Mat w = rng.normal_matrix(4, 1, 1.0);
  auto build = [&](nn::Tape& t) {
    return weighted_sum(t, t.diag(t.param(a)), w);
  };
  CHECK(fd_max_rel_err({&a}, build) < kTol);
}

TEST_CASE("tape im2col geometry and gradient") {
  Rng rng(114);
  auto x = make_param("x", 6, 2, rng);
  {
    nn::Tape t;
    int y = t.im2col(t.param(x), 3, 1, 1, 1);
    CHECK(t.value(y).rows() == 6);
    CHECK(t.value(y).cols() == 6);
    // middle window of the first output row is row 0 of x, left pad is zero
    CHECK(t.value(y)(0, 0) == 0.0);
    CHECK(t.value(y)(0, 2) == x.value(0, 0));
    CHECK(t.value(y)(0, 3) == x.value(0, 1));
    CHECK(t.value(y)(0, 4) == x.value(1, 0));
  }
  {
    nn::Tape t;
    int y = t.im2col(t.param(x), 9, 2, 4, 4);
    CHECK(t.value(y).rows() == 3);  // ceil(6 / 2)
    CHECK(t.value(y).cols() == 18);
  }
  Mat w1 = rng.normal_matrix(6, 6, 1.0);
  Mat w2 = rng.normal_matrix(3, 18, 1.0);
  auto build = [&](nn::Tape& t) {
    int p = t.param(x);
    int s1 = weighted_sum(t, t.im2col(p, 3, 1, 1, 1), w1);
    int s2 = weighted_sum(t, t.im2col(p, 9, 2, 4, 4), w2);
    return t.add(s1, s2);
  };
  CHECK(fd_max_rel_err({&x}, build) < kTol);
}

TEST_CASE("tape region_fuse matches dense one-hot layer") {
  Rng rng(115);
  const int l = 7, n_classes = 11, out = 5;
  Mat box = rng.normal_matrix(l, 5, 1.0);
  Mat score = rng.normal_matrix(l, 1, 1.0);
  std::vector<int> cls;
  for (int i = 0; i < l; ++i)
    cls.push_back(static_cast<int>(rng.uniform_int(n_classes)));
  auto W = make_param("W", 5 + n_classes + 1, out, rng);
  auto b = make_param("b", 1, out, rng);

  Mat dense_in = Mat::Zero(l, 5 + n_classes + 1);
  dense_in.leftCols(5) = box;
  for (int i = 0; i < l; ++i) dense_in(i, 5 + cls[i]) = 1.0;
  dense_in.col(5 + n_classes) = score;

  Mat w = rng.normal_matrix(l, out, 1.0);

  // values agree
  nn::Tape ta;
  int ya = ta.region_fuse(box, cls, score, ta.param(W), ta.param(b), n_classes);
  nn::Tape tb;
  int yb = tb.add_rowvec(tb.matmul(tb.constant(dense_in), tb.param(W)),
                         tb.param(b));
  CHECK((ta.value(ya) - tb.value(yb)).cwiseAbs().maxCoeff() < 1e-12);

  // gradients agree with the dense formulation
  W.zero_grad();
  b.zero_grad();
  ta.backward_seeded({{ya, w}});
  Mat gW_sparse = W.grad, gb_sparse = b.grad;
  W.zero_grad();
  b.zero_grad();
  tb.backward_seeded({{yb, w}});
  CHECK((gW_sparse - W.grad).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((gb_sparse - b.grad).cwiseAbs().maxCoeff() < 1e-12);

  // and with finite differences
  auto build = [&](nn::Tape& t) {
    return weighted_sum(
        t, t.region_fuse(box, cls, score, t.param(W), t.param(b), n_classes),
        w);
  };
  CHECK(fd_max_rel_err({&W, &b}, build) < kTol);
}

TEST_CASE("tape param reuse accumulates one gradient") {
  Rng rng(116);
  auto a = make_param("a", 2, 2, rng);
  Mat w1 = rng.normal_matrix(2, 2, 1.0);
  Mat w2 = rng.normal_matrix(2, 2, 1.0);
  auto build = [&](nn::Tape& t) {
    int p1 = t.param(a);
    int p2 = t.param(a);
    CHECK(p1 == p2);  // cached leaf
    int s1 = weighted_sum(t, t.matmul(p1, p1), w1);
    int s2 = weighted_sum(t, p2, w2);
    return t.add(s1, s2);
  };
  CHECK(fd_max_rel_err({&a}, build) < kTol);
}

TEST_CASE("tape backward_seeded equals composite scalar backward") {
  Rng rng(117);
  auto a = make_param("a", 3, 3, rng);
  auto b = make_param("b", 3, 2, rng);
  Mat s1 = rng.normal_matrix(3, 2, 1.0);
  Mat s2 = rng.normal_matrix(1, 2, 1.0);

  a.zero_grad();
  b.zero_grad();
  {
    nn::Tape t;
    int y1 = t.matmul(t.param(a), t.param(b));
    int y2 = t.mean_rows(y1);
    t.backward_seeded({{y1, s1}, {y2, s2}});
  }
  Mat ga = a.grad, gb = b.grad;

  a.zero_grad();
  b.zero_grad();
  {
    nn::Tape t;
    int y1 = t.matmul(t.param(a), t.param(b));
    int y2 = t.mean_rows(y1);
    int root = t.add(t.sum(t.mul_const(y1, s1)), t.sum(t.mul_const(y2, s2)));
    t.backward(root);
  }
  CHECK((ga - a.grad).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((gb - b.grad).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("tape error paths") {
  Rng rng(118);
  nn::Tape t;
  int a = t.constant(rng.normal_matrix(2, 3, 1.0));
  int b = t.constant(rng.normal_matrix(2, 2, 1.0));
  CHECK_THROWS_AS(t.add(a, b), sas::SasError);
  CHECK_THROWS_AS(t.matmul(a, a), sas::SasError);
  CHECK_THROWS_AS(t.slice_cols(a, 2, 5), sas::SasError);
  CHECK_THROWS_AS(t.backward(a), sas::SasError);  // non-scalar root

  nn::Tape frozen(false);
  nn::Param p = make_param("p", 2, 2, rng);
  int y = frozen.sum(frozen.param(p));
  CHECK_THROWS_AS(frozen.backward(y), sas::SasError);
}

TEST_CASE("linear layer gradient") {
  Rng rng(119);
  nn::Linear lin;
  lin.init("lin", 4, 3, rng);
  auto x = make_param("x", 2, 4, rng);
  Mat w = rng.normal_matrix(2, 3, 1.0);
  auto build = [&](nn::Tape& t) {
    return weighted_sum(t, lin.apply(t, t.param(x)), w);
  };
  CHECK(fd_max_rel_err({&x, &lin.W, &lin.b}, build) < kTol);
}

TEST_CASE("lstm cell two-step gradient") {
  Rng rng(120);
  nn::LSTMCell cell;
  cell.init("lstm", 3, 4, rng);
  CHECK(cell.b.value(0, 4) == 1.0);  // forget-gate bias
  CHECK(cell.b.value(0, 0) == 0.0);
  auto x0 = make_param("x0", 1, 3, rng);
  auto x1 = make_param("x1", 1, 3, rng);
  auto h0 = make_param("h0", 1, 4, rng, 0.5);
  auto c0 = make_param("c0", 1, 4, rng, 0.5);
  Mat w = rng.normal_matrix(1, 8, 1.0);
  auto build = [&](nn::Tape& t) {
    auto [h1, c1] = cell.step(t, t.param(x0), t.param(h0), t.param(c0));
    auto [h2, c2] = cell.step(t, t.param(x1), h1, c1);
    return weighted_sum(t, t.hcat({h2, c2}), w);
  };
  CHECK(fd_max_rel_err(
            {&x0, &x1, &h0, &c0, &cell.W_ih, &cell.W_hh, &cell.b}, build) <
        kTol);
}

TEST_CASE("gru cell two-step gradient") {
  Rng rng(121);
  nn::GRUCell cell;
  cell.init("gru", 3, 4, rng);
  auto x0 = make_param("x0", 1, 3, rng);
  auto x1 = make_param("x1", 1, 3, rng);
  auto h0 = make_param("h0", 1, 4, rng, 0.5);
  Mat w = rng.normal_matrix(1, 4, 1.0);
  auto build = [&](nn::Tape& t) {
    int h1 = cell.step(t, t.param(x0), t.param(h0));
    int h2 = cell.step(t, t.param(x1), h1);
    return weighted_sum(t, h2, w);
  };
  CHECK(fd_max_rel_err({&x0, &x1, &h0, &cell.W_ih, &cell.W_hh, &cell.b_ih,
                        &cell.b_hh},
                       build) < kTol);
}

TEST_CASE("gru cell matches straight-line recurrence") {
  Rng rng(122);
  const int in = 3, H = 4;
  nn::GRUCell cell;
  cell.init("gru", in, H, rng);
  Mat x = rng.normal_matrix(1, in, 1.0);
  Mat h = rng.normal_matrix(1, H, 0.5);

  nn::Tape t(false);
  int hn = cell.step(t, t.constant(x), t.constant(h));

  auto sig = [](double v) { return 1.0 / (1.0 + std::exp(-v)); };
  Mat gi = x * cell.W_ih.value + cell.b_ih.value;
  Mat gh = h * cell.W_hh.value + cell.b_hh.value;
  Mat expect(1, H);
  for (int k = 0; k < H; ++k) {
    double r = sig(gi(0, k) + gh(0, k));
    double z = sig(gi(0, H + k) + gh(0, H + k));
    double n = std::tanh(gi(0, 2 * H + k) + r * gh(0, 2 * H + k));
    expect(0, k) = (1.0 - z) * n + z * h(0, k);
  }
  CHECK((t.value(hn) - expect).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("conv1d layer shape and gradient") {
  Rng rng(123);
  nn::Conv1d conv;
  conv.init("conv", 2, 3, 5, 1, rng);
  auto x = make_param("x", 7, 2, rng);
  {
    nn::Tape t;
    CHECK(t.value(conv.apply(t, t.param(x))).rows() == 7);
  }
  nn::Conv1d strided;
  strided.init("conv2", 2, 3, 9, 2, rng);
  {
    nn::Tape t;
    CHECK(t.value(strided.apply(t, t.param(x))).rows() == 4);  // ceil(7 / 2)
  }
  Mat w = rng.normal_matrix(7, 3, 1.0);
  auto build = [&](nn::Tape& t) {
    return weighted_sum(t, conv.apply(t, t.param(x)), w);
  };
  CHECK(fd_max_rel_err({&x, &conv.W, &conv.b}, build) < kTol);
}

TEST_CASE("dropout scales kept entries and passes gradient") {
  Rng rng(124);
  auto x = make_param("x", 8, 8, rng);
  {
    nn::Tape t;
    Rng drop(7);
    int y = nn::dropout(t, t.param(x), 0.5, drop, true);
    const Mat& Y = t.value(y);
    int kept = 0;
    for (Eigen::Index i = 0; i < 8; ++i)
      for (Eigen::Index j = 0; j < 8; ++j) {
        if (Y(i, j) == 0.0) continue;
        ++kept;
        CHECK(Y(i, j) == doctest::Approx(2.0 * x.value(i, j)));
      }
    CHECK(kept > 8);   // not everything dropped
    CHECK(kept < 56);  // not everything kept
  }
  {
    nn::Tape t;
    Rng drop(7);
    int y = nn::dropout(t, t.param(x), 0.5, drop, false);
    CHECK((t.value(y) - x.value).cwiseAbs().maxCoeff() == 0.0);
  }
  Mat w = rng.normal_matrix(8, 8, 1.0);
  auto build = [&](nn::Tape& t) {
    Rng drop(7);
    return weighted_sum(t, nn::dropout(t, t.param(x), 0.5, drop, true), w);
  };
  CHECK(fd_max_rel_err({&x}, build) < kTol);
}
