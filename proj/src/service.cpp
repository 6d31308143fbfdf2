#include "mg1/service.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "mg1/errors.hpp"
#include "mg1/text_format.hpp"

namespace mg1 {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void require_rate(double rate, const char* what) {
  if (!(rate > 0.0) || !std::isfinite(rate)) {
    throw InvalidArgument(std::string(what) + " must be a positive finite rate");
  }
}

}  // namespace

ServiceDist::ServiceDist(Family family) : family_(std::move(family)) {
  std::visit(overloaded{
                 [](const Exponential& e) { require_rate(e.rate, "exponential rate"); },
                 [](const Erlang& e) {
                   if (e.shape == 0) throw InvalidArgument("erlang shape must be >= 1");
                   require_rate(e.rate, "erlang rate");
                 },
                 [](const Deterministic& d) {
                   if (!(d.value > 0.0) || !std::isfinite(d.value)) {
                     throw InvalidArgument("deterministic service time must be positive");
                   }
                 },
                 [](const HyperExponential& h) {
                   if (h.weights.empty() || h.weights.size() != h.rates.size()) {
                     throw InvalidArgument("hyper-exponential needs matching weights and rates");
                   }
                   for (double w : h.weights) {
                     if (!(w >= 0.0)) throw InvalidArgument("hyper-exponential weights must be >= 0");
                   }
                   for (double r : h.rates) require_rate(r, "hyper-exponential rate");
                   const double total = std::accumulate(h.weights.begin(), h.weights.end(), 0.0);
                   if (std::abs(total - 1.0) > 1e-9) {
                     throw InvalidArgument("hyper-exponential weights must sum to 1");
                   }
                 },
             },
             family_);
}

ServiceDist ServiceDist::parse(std::string_view text) {
  text = trim(text);
  const auto colon = text.find(':');
  if (colon == std::string_view::npos) {
    throw InvalidArgument("service spec must look like family:params, got '" + std::string(text) + "'");
  }
  const auto family = text.substr(0, colon);
  const auto params = text.substr(colon + 1);
  if (family == "exp") return exponential(parse_double(params));
  if (family == "det") return deterministic(parse_double(params));
  if (family == "erlang") {
    const auto parts = split(params, ',');
    if (parts.size() != 2) throw InvalidArgument("erlang expects erlang:<k>,<mu>");
    const auto k = parse_uint(parts[0]);
    if (k > std::numeric_limits<unsigned>::max()) throw InvalidArgument("erlang shape too large");
    return erlang(static_cast<unsigned>(k), parse_double(parts[1]));
  }
  if (family == "hyper") {
    std::vector<double> weights;
    std::vector<double> rates;
    for (auto component : split(params, ';')) {
      const auto parts = split(component, ',');
      if (parts.size() != 2) throw InvalidArgument("hyper expects hyper:<w1>,<mu1>;<w2>,<mu2>...");
      weights.push_back(parse_double(parts[0]));
      rates.push_back(parse_double(parts[1]));
    }
    return hyper_exponential(std::move(weights), std::move(rates));
  }
  throw InvalidArgument("unknown service family '" + std::string(family) + "'");
}

std::string ServiceDist::to_string() const {
  return std::visit(overloaded{
                        [](const Exponential& e) { return "exp:" + format_double(e.rate); },
                        [](const Erlang& e) {
                          return "erlang:" + std::to_string(e.shape) + "," + format_double(e.rate);
                        },
                        [](const Deterministic& d) { return "det:" + format_double(d.value); },
                        [](const HyperExponential& h) {
                          std::string out = "hyper:";
                          for (std::size_t i = 0; i < h.weights.size(); ++i) {
                            if (i) out += ';';
                            out += format_double(h.weights[i]) + "," + format_double(h.rates[i]);
                          }
                          return out;
                        },
                    },
                    family_);
}

double ServiceDist::mean() const {
  return std::visit(overloaded{
                        [](const Exponential& e) { return 1.0 / e.rate; },
                        [](const Erlang& e) { return e.shape / e.rate; },
                        [](const Deterministic& d) { return d.value; },
                        [](const HyperExponential& h) {
                          double m = 0.0;
                          for (std::size_t i = 0; i < h.weights.size(); ++i) m += h.weights[i] / h.rates[i];
                          return m;
                        },
                    },
                    family_);
}

double ServiceDist::variance() const {
  return std::visit(overloaded{
                        [](const Exponential& e) { return 1.0 / (e.rate * e.rate); },
                        [](const Erlang& e) { return e.shape / (e.rate * e.rate); },
                        [](const Deterministic&) { return 0.0; },
                        [this](const HyperExponential& h) {
                          double second = 0.0;
                          for (std::size_t i = 0; i < h.weights.size(); ++i) {
                            second += 2.0 * h.weights[i] / (h.rates[i] * h.rates[i]);
                          }
                          const double m = mean();
                          return second - m * m;
                        },
                    },
                    family_);
}

double ServiceDist::sample(RandomStream& rng) const {
  return std::visit(overloaded{
                        [&](const Exponential& e) { return rng.exponential(e.rate); },
                        [&](const Erlang& e) {
                          double total = 0.0;
                          for (unsigned i = 0; i < e.shape; ++i) total += rng.exponential(e.rate);
                          return total;
                        },
                        [](const Deterministic& d) { return d.value; },
                        [&](const HyperExponential& h) {
                          const double u = rng.uniform();
                          double cumulative = 0.0;
                          std::size_t pick = h.weights.size() - 1;
                          for (std::size_t i = 0; i < h.weights.size(); ++i) {
                            cumulative += h.weights[i];
                            if (u < cumulative) {
                              pick = i;
                              break;
                            }
                          }
                          return rng.exponential(h.rates[pick]);
                        },
                    },
                    family_);
}

double ServiceDist::lst(double s) const {
  return std::visit(overloaded{
                        [s](const Exponential& e) { return e.rate / (e.rate + s); },
                        [s](const Erlang& e) { return std::pow(e.rate / (e.rate + s), e.shape); },
                        [s](const Deterministic& d) { return std::exp(-s * d.value); },
                        [s](const HyperExponential& h) {
                          double v = 0.0;
                          for (std::size_t i = 0; i < h.weights.size(); ++i) {
                            v += h.weights[i] * h.rates[i] / (h.rates[i] + s);
                          }
                          return v;
                        },
                    },
                    family_);
}

double ServiceDist::lst_derivative(double s) const {
  return std::visit(overloaded{
                        [s](const Exponential& e) { return -e.rate / ((e.rate + s) * (e.rate + s)); },
                        [s](const Erlang& e) {
                          return -static_cast<double>(e.shape) * std::pow(e.rate, e.shape) /
                                 std::pow(e.rate + s, e.shape + 1);
                        },
                        [s](const Deterministic& d) { return -d.value * std::exp(-s * d.value); },
                        [s](const HyperExponential& h) {
                          double v = 0.0;
                          for (std::size_t i = 0; i < h.weights.size(); ++i) {
                            v -= h.weights[i] * h.rates[i] / ((h.rates[i] + s) * (h.rates[i] + s));
                          }
                          return v;
                        },
                    },
                    family_);
}

double ServiceDist::lst_abscissa() const {
  return std::visit(overloaded{
                        [](const Exponential& e) { return -e.rate; },
                        [](const Erlang& e) { return -e.rate; },
                        [](const Deterministic&) { return -std::numeric_limits<double>::infinity(); },
                        [](const HyperExponential& h) {
                          double lowest = std::numeric_limits<double>::infinity();
                          for (std::size_t i = 0; i < h.weights.size(); ++i) {
                            if (h.weights[i] > 0.0) lowest = std::min(lowest, h.rates[i]);
                          }
                          return -lowest;
                        },
                    },
                    family_);
}

bool ServiceDist::has_density() const { return !std::holds_alternative<Deterministic>(family_); }

double ServiceDist::density(double t) const {
  if (t < 0.0) return 0.0;
  return std::visit(overloaded{
                        [t](const Exponential& e) { return e.rate * std::exp(-e.rate * t); },
                        [t](const Erlang& e) {
                          const double k = e.shape;
                          if (t == 0.0) return e.shape == 1 ? e.rate : 0.0;
                          return std::exp(k * std::log(e.rate) + (k - 1.0) * std::log(t) - e.rate * t -
                                          std::lgamma(k));
                        },
                        [](const Deterministic&) -> double {
                          throw InvalidArgument("deterministic service has no density");
                        },
                        [t](const HyperExponential& h) {
                          double v = 0.0;
                          for (std::size_t i = 0; i < h.weights.size(); ++i) {
                            v += h.weights[i] * h.rates[i] * std::exp(-h.rates[i] * t);
                          }
                          return v;
                        },
                    },
                    family_);
}

}  // namespace mg1
