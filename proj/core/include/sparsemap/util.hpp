#pragma once

#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <utility>

namespace sparsemap {

// Poor man's expected<T, string>: domain failures (infeasible schedule,
// generation retry exhaustion, ...) are values the caller branches on,
// not exceptions.
template <typename T>
struct Result {
  std::optional<T> val;
  std::string err;

  static Result ok(T v) { return Result{std::move(v), {}}; }
  static Result fail(std::string why) { return Result{std::nullopt, std::move(why)}; }

  explicit operator bool() const { return val.has_value(); }
  T& value() { return *val; }
  const T& value() const { return *val; }
  const std::string& error() const { return err; }
};

// Exact rational, used for speedup so 5/3 does not get frozen as 1.6666...
struct Ratio {
  long long num = 0;
  long long den = 1;

  static Ratio of(long long n, long long d) {
    long long g = std::gcd(n, d);
    if (g == 0) return {0, 1};
    n /= g;
    d /= g;
    if (d < 0) { n = -n; d = -d; }
    return {n, d};
  }
  double value() const { return den == 0 ? 0.0 : double(num) / double(den); }
  // Shortest decimal with at most two places: 3/2 -> "1.5", 5/3 -> "1.67", 2/1 -> "2".
  std::string str() const;
  bool operator==(const Ratio& o) const { return num == o.num && den == o.den; }
};

}  // namespace sparsemap
