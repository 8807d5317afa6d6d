#include <cmath>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "sgbench/adam.hpp"
#include "sgbench/fmt.hpp"
#include "sgbench/matrix.hpp"
#include "sgbench/ops.hpp"
#include "sgbench/rng.hpp"

using namespace sgbench;

TEST_CASE("rng streams are reproducible and key-separated") {
  Rng a(42), b(42);
  for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());

  Rng k1 = Rng::keyed(7, 1), k1b = Rng::keyed(7, 1), k2 = Rng::keyed(7, 2);
  CHECK(k1.next_u64() == k1b.next_u64());
  CHECK(k1.next_u64() != k2.next_u64());
  CHECK(derive_seed(7, 1, 2, 3) != derive_seed(7, 1, 3, 2));
}

TEST_CASE("rng uniform stays in [0,1) and normal has sane moments") {
  Rng rng(123);
  double sum = 0.0, sum2 = 0.0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) {
    double u = rng.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    double z = rng.normal();
    sum += z;
    sum2 += z * z;
  }
  CHECK(std::abs(sum / n) < 0.05);
  CHECK(std::abs(sum2 / n - 1.0) < 0.05);
}

TEST_CASE("matmul and transpose agree with hand results") {
  DenseMatrix a(2, 3), b(3, 2);
  double av[] = {1, 2, 3, 4, 5, 6}, bv[] = {7, 8, 9, 10, 11, 12};
  a.data.assign(av, av + 6);
  b.data.assign(bv, bv + 6);
  DenseMatrix c = matmul(a, b);
  CHECK(c.rows == 2);
  CHECK(c.cols == 2);
  CHECK(c(0, 0) == doctest::Approx(58));
  CHECK(c(0, 1) == doctest::Approx(64));
  CHECK(c(1, 0) == doctest::Approx(139));
  CHECK(c(1, 1) == doctest::Approx(154));

  DenseMatrix at = transpose(a);
  CHECK(at.rows == 3);
  CHECK(at(0, 1) == 4);
  CHECK(at(2, 0) == 3);

  DenseMatrix bad(4, 4);
  CHECK_THROWS_AS((void)matmul(a, bad), std::invalid_argument);
}

TEST_CASE("axpy accumulates and shape mismatches are rejected") {
  DenseMatrix x(2, 2, 1.0), y(2, 2, 3.0);
  axpy(0.5, x, y);
  CHECK(y(1, 1) == doctest::Approx(3.5));
  DenseMatrix z(1, 2);
  CHECK_THROWS_AS(require_same_shape(x, z, "here"), std::invalid_argument);
}

TEST_CASE("format_double round-trips exactly") {
  for (double v : {0.1, 1.0 / 3.0, -2.5e-17, 1e300, 0.0, 221.0}) {
    std::string s = format_double(v);
    CHECK(std::stod(s) == v);
  }
}

TEST_CASE("mse matches the hand value and its gradient is analytic") {
  DenseMatrix pred(1, 2), target(1, 2, 0.0);
  pred(0, 0) = 1.0;
  pred(0, 1) = 0.0;
  CHECK(mse(pred, target) == doctest::Approx(0.5));

  DenseMatrix grad(1, 2, 0.0);
  mse_backward(pred, target, 1.0, &grad);
  CHECK(grad(0, 0) == doctest::Approx(1.0));  // 2 * (1 - 0) / 2
  CHECK(grad(0, 1) == doctest::Approx(0.0));
}

TEST_CASE("relu and leaky_relu backward match finite differences") {
  Rng rng(9);
  DenseMatrix x(3, 4);
  for (double& v : x.data) v = rng.normal();

  Parameter p(3, 4);
  p.value = x;
  auto loss_relu = [&]() {
    DenseMatrix t(3, 4, 0.25);
    return mse(relu(p.value), t);
  };
  // analytic: d mse / d relu -> relu_backward
  {
    DenseMatrix t(3, 4, 0.25);
    DenseMatrix h = relu(p.value);
    DenseMatrix g(3, 4, 0.0);
    mse_backward(h, t, 1.0, &g);
    p.zero_grad();
    relu_backward(p.value, g, &p.grad);
  }
  CHECK(grad_check(loss_relu, {&p}) < 1e-6);

  auto loss_leaky = [&]() {
    DenseMatrix t(3, 4, -0.5);
    return mse(leaky_relu(p.value, 0.2), t);
  };
  {
    DenseMatrix t(3, 4, -0.5);
    DenseMatrix h = leaky_relu(p.value, 0.2);
    DenseMatrix g(3, 4, 0.0);
    mse_backward(h, t, 1.0, &g);
    p.zero_grad();
    leaky_relu_backward(p.value, 0.2, g, &p.grad);
  }
  CHECK(grad_check(loss_leaky, {&p}) < 1e-6);
}

TEST_CASE("masked softmax rows sum to one over the mask and zero outside") {
  DenseMatrix logits(2, 3), mask(2, 3, 0.0);
  logits(0, 0) = 1.0;
  logits(0, 1) = 2.0;
  logits(0, 2) = 50.0;  // masked out, must not leak
  logits(1, 2) = -1.0;
  mask(0, 0) = mask(0, 1) = 1.0;
  mask(1, 2) = 1.0;

  DenseMatrix s = masked_row_softmax(logits, mask);
  CHECK(s(0, 0) + s(0, 1) == doctest::Approx(1.0));
  CHECK(s(0, 2) == 0.0);
  CHECK(s(1, 2) == doctest::Approx(1.0));
  double e = std::exp(1.0) / (std::exp(1.0) + std::exp(2.0));
  CHECK(s(0, 0) == doctest::Approx(e));
}

TEST_CASE("masked softmax backward matches finite differences") {
  Rng rng(17);
  Parameter logits(3, 3);
  DenseMatrix mask(3, 3, 0.0);
  mask(0, 0) = mask(0, 1) = 1.0;
  mask(1, 0) = mask(1, 1) = mask(1, 2) = 1.0;
  mask(2, 2) = 1.0;
  for (double& v : logits.value.data) v = rng.normal();

  DenseMatrix t(3, 3, 0.1);
  auto loss = [&]() { return mse(masked_row_softmax(logits.value, mask), t); };
  DenseMatrix s = masked_row_softmax(logits.value, mask);
  DenseMatrix g(3, 3, 0.0);
  mse_backward(s, t, 1.0, &g);
  logits.zero_grad();
  masked_row_softmax_backward(s, mask, g, &logits.grad);
  CHECK(grad_check(loss, {&logits}) < 1e-6);
}

TEST_CASE("dropout is identity in eval mode and scales survivors in training") {
  DenseMatrix h(50, 10, 1.0);
  Rng rng(5);
  DropoutResult eval = dropout(h, 0.5, false, rng);
  CHECK(eval.out.data == h.data);

  Rng rng2(5);
  DropoutResult tr = dropout(h, 0.5, true, rng2);
  int zeros = 0;
  for (double v : tr.out.data) {
    if (v == 0.0)
      ++zeros;
    else
      CHECK(v == doctest::Approx(2.0));  // 1 / (1 - 0.5)
  }
  CHECK(zeros > 150);
  CHECK(zeros < 350);
}

TEST_CASE("add_row_bias broadcasts and its backward sums rows") {
  DenseMatrix h(2, 3, 1.0), bias(1, 3);
  bias(0, 0) = 10;
  bias(0, 1) = 20;
  bias(0, 2) = 30;
  DenseMatrix out = add_row_bias(h, bias);
  CHECK(out(1, 2) == doctest::Approx(31.0));

  DenseMatrix g(2, 3, 1.0), gh(2, 3, 0.0), gb(1, 3, 0.0);
  add_row_bias_backward(g, &gh, &gb);
  CHECK(gb(0, 0) == doctest::Approx(2.0));
  CHECK(gh(0, 0) == doctest::Approx(1.0));
}

TEST_CASE("adam step matches the closed form on a single scalar") {
  Parameter p(1, 1);
  p.value(0, 0) = 1.0;
  std::vector<Parameter*> params = {&p};
  AdamState st = make_adam_state(params, 0.001, 0.0);

  p.grad(0, 0) = 1.0;
  adam_step(params, st);
  // m_hat = 1, v_hat = 1 -> theta = 1 - lr * 1 / (1 + eps)
  CHECK(p.value(0, 0) == doctest::Approx(1.0 - 0.001).epsilon(1e-9));
  CHECK(st.step_count == 1);
  CHECK(p.grad(0, 0) == 0.0);  // gradients cleared after the step
}

TEST_CASE("adam weight decay pulls parameters toward zero with zero gradient") {
  Parameter p(1, 1);
  p.value(0, 0) = 1.0;
  std::vector<Parameter*> params = {&p};
  AdamState st = make_adam_state(params, 0.001, 0.1);
  p.grad(0, 0) = 0.0;
  adam_step(params, st);
  // effective gradient 0.1 * theta; m_hat/sqrt(v_hat) = 1 -> one lr step down
  CHECK(p.value(0, 0) == doctest::Approx(1.0 - 0.001).epsilon(1e-6));
}

TEST_CASE("grad_check flags a wrong gradient") {
  Parameter p(1, 1);
  p.value(0, 0) = 2.0;
  auto loss = [&]() { return p.value(0, 0) * p.value(0, 0); };
  p.grad(0, 0) = 4.0;  // correct d(x^2)/dx at 2
  CHECK(grad_check(loss, {&p}) < 1e-6);
  p.grad(0, 0) = 3.0;  // wrong on purpose
  CHECK(grad_check(loss, {&p}) > 1e-2);
}
