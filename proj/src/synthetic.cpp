/*
 * Copyright 2026 The jointrank Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "jointrank/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>

#include "jointrank/csv_io.hpp"
#include "jointrank/error.hpp"
#include "random_util.hpp"

namespace jointrank {

namespace {

using internal::unit_uniform;

// Samplers built only on 64-bit draws so files are identical across
// standard library implementations.
class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : rng_(seed) {}

  std::mt19937_64& engine() { return rng_; }

  double uniform() { return unit_uniform(rng_); }

  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = 0.0;
    do {
      u1 = uniform();
    } while (u1 <= 0.0);
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    spare_ = r * std::sin(2.0 * std::numbers::pi * u2);
    has_spare_ = true;
    return r * std::cos(2.0 * std::numbers::pi * u2);
  }

  // Sum of Poisson(<= 30) draws by multiplication of uniforms.
  std::uint64_t poisson(double lambda) {
    std::uint64_t total = 0;
    while (lambda > 0.0) {
      const double chunk = std::min(lambda, 30.0);
      lambda -= chunk;
      const double limit = std::exp(-chunk);
      double prod = uniform();
      while (prod > limit) {
        ++total;
        prod *= uniform();
      }
    }
    return total;
  }

  // Marsaglia-Tsang.
  double gamma(double shape) {
    if (shape < 1.0) {
      double u = 0.0;
      do {
        u = uniform();
      } while (u <= 0.0);
      return gamma(shape + 1.0) * std::pow(u, 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    while (true) {
      double x = 0.0;
      double v = 0.0;
      do {
        x = normal();
        v = 1.0 + c * x;
      } while (v <= 0.0);
      v = v * v * v;
      const double u = uniform();
      if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
      if (u > 0.0 && std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) {
        return d * v;
      }
    }
  }

  // Index drawn from a cumulative distribution ending at 1.
  std::size_t categorical(const std::vector<double>& cumulative) {
    const double u = uniform();
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
    return std::min<std::size_t>(it - cumulative.begin(), cumulative.size() - 1);
  }

 private:
  std::mt19937_64 rng_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

std::vector<double> cumulative_of(std::vector<double> weights) {
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  double run = 0.0;
  for (double& w : weights) {
    run += w / total;
    w = run;
  }
  weights.back() = 1.0;
  return weights;
}

std::string pad_id(char prefix, std::size_t value, std::size_t width) {
  std::string digits = std::to_string(value);
  if (digits.size() < width) digits.insert(0, width - digits.size(), '0');
  return std::string(1, prefix) + digits;
}

// Mostly daytime load with a morning and an evening peak.
std::array<double, kBinsPerDay> diurnal_shape() {
  std::array<double, kBinsPerDay> shape{};
  for (int b = 0; b < kBinsPerDay; ++b) {
    const double hour = (b + 0.5) / 2.0;
    shape[b] = 0.3 + std::exp(-0.5 * std::pow((hour - 8.5) / 2.0, 2.0)) +
               1.3 * std::exp(-0.5 * std::pow((hour - 18.5) / 2.5, 2.0));
  }
  return shape;
}

double round_kwh(double x) { return std::round(x * 1000.0) / 1000.0; }

}  // namespace

std::size_t SyntheticSpec::anomaly_count() const {
  return static_cast<std::size_t>(
      std::floor(anomaly_fraction * static_cast<double>(cases)));
}

void SyntheticSpec::validate() const {
  const auto fail = [](const std::string& what) {
    return Error(ErrorCode::kConfigError, "synthetic spec: " + what);
  };
  if (cases < 100) throw fail("cases must be >= 100");
  if (codes < 2) throw fail("codes must be >= 2");
  if (!(anomaly_fraction >= 0.0 && anomaly_fraction < 0.5)) {
    throw fail("anomaly fraction must be in [0, 0.5)");
  }
  if (days < 1) throw fail("days must be >= 1");
  if (!(event_rate > 0.0) || !(code_concentration > 0.0)) {
    throw fail("event rate and code concentration must be positive");
  }
  if (anomaly_codes < 1 || anomaly_codes > codes) {
    throw fail("anomaly codes must be in [1, codes]");
  }
  if (!(anomaly_code_share >= 0.0 && anomaly_code_share <= 1.0)) {
    throw fail("anomaly code share must be in [0, 1]");
  }
  if (!(consumption_mean > 0.0) || consumption_level_sd < 0.0 ||
      consumption_noise < 0.0 || !(anomaly_level > 0.0)) {
    throw fail("consumption parameters must be positive");
  }
  for (int d = 0; d < 7; ++d) {
    if (!(weekly_profile[d] > 0.0) || !(anomaly_profile[d] > 0.0)) {
      throw fail("weekly profiles must be positive");
    }
  }
}

std::vector<std::string> SyntheticData::anomalous_ids() const {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < case_ids.size(); ++i) {
    if (is_anomaly[i]) out.push_back(case_ids[i]);
  }
  return out;
}

SyntheticData generate_synthetic(const SyntheticSpec& spec) {
  spec.validate();
  Sampler rng(spec.seed);

  const std::size_t m = spec.cases;
  const std::size_t p = spec.codes;
  const std::size_t width = std::to_string(m).size();

  SyntheticData data;
  data.case_ids.reserve(m);
  for (std::size_t i = 0; i < m; ++i) data.case_ids.push_back(pad_id('C', i + 1, width));
  std::vector<std::string> code_names;
  for (std::size_t j = 0; j < p; ++j) {
    code_names.push_back(pad_id('E', j + 1, std::to_string(p).size()));
  }

  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), 0);
  internal::shuffle(order.begin(), order.end(), rng.engine());
  data.is_anomaly.assign(m, false);
  for (std::size_t k = 0; k < spec.anomaly_count(); ++k) {
    data.is_anomaly[order[k]] = true;
  }

  // Shared background code distribution; anomalies favour the rarest codes.
  std::vector<double> background(p);
  for (auto& w : background) w = rng.gamma(spec.code_concentration);
  std::vector<std::size_t> by_weight(p);
  std::iota(by_weight.begin(), by_weight.end(), 0);
  std::stable_sort(by_weight.begin(), by_weight.end(),
                   [&](std::size_t a, std::size_t b) {
                     return background[a] < background[b];
                   });
  const double background_total =
      std::accumulate(background.begin(), background.end(), 0.0);
  std::vector<double> anomalous(p);
  for (std::size_t j = 0; j < p; ++j) {
    anomalous[j] = (1.0 - spec.anomaly_code_share) * background[j] /
                   background_total;
  }
  for (std::size_t k = 0; k < spec.anomaly_codes; ++k) {
    anomalous[by_weight[k]] +=
        spec.anomaly_code_share / static_cast<double>(spec.anomaly_codes);
  }
  const auto background_cdf = cumulative_of(background);
  const auto anomalous_cdf = cumulative_of(anomalous);

  const bool events_planted = spec.planted_in != PlantedIn::kConsumptionOnly;
  const bool consumption_planted = spec.planted_in != PlantedIn::kEventsOnly;
  const auto shape = diurnal_shape();
  constexpr std::int64_t kSecondsPerDay = 86400;

  for (std::size_t i = 0; i < m; ++i) {
    const std::string& id = data.case_ids[i];
    const bool anomaly = data.is_anomaly[i];

    const auto& cdf = anomaly && events_planted ? anomalous_cdf : background_cdf;
    const std::uint64_t count = rng.poisson(spec.event_rate);
    std::vector<std::pair<std::int64_t, std::size_t>> events;
    events.reserve(count);
    for (std::uint64_t e = 0; e < count; ++e) {
      const auto offset = static_cast<std::int64_t>(internal::uniform_below(
          rng.engine(),
          static_cast<std::uint64_t>(spec.days) * kSecondsPerDay));
      events.emplace_back(offset, rng.categorical(cdf));
    }
    std::sort(events.begin(), events.end());
    for (const auto& [offset, code] : events) {
      data.events.push_back(EventRecord{
          id, Timestamp{spec.start} + std::chrono::seconds{offset},
          code_names[code]});
    }

    const bool shifted = anomaly && consumption_planted;
    const auto& profile = shifted ? spec.anomaly_profile : spec.weekly_profile;
    const double level =
        spec.consumption_mean * (shifted ? spec.anomaly_level : 1.0) *
        std::exp(spec.consumption_level_sd * rng.normal() -
                 0.5 * spec.consumption_level_sd * spec.consumption_level_sd);
    for (int d = 0; d < spec.days; ++d) {
      ConsumptionRecord rec;
      rec.case_id = id;
      rec.date = spec.start + std::chrono::days{d};
      const unsigned dow = std::chrono::weekday{rec.date}.iso_encoding() - 1;
      const double noise = spec.consumption_noise;
      const double total = level * profile[dow] *
                           std::exp(noise * rng.normal() - 0.5 * noise * noise);
      std::array<double, kBinsPerDay> w{};
      double wsum = 0.0;
      for (int b = 0; b < kBinsPerDay; ++b) {
        w[b] = shape[b] * std::exp(0.2 * rng.normal());
        wsum += w[b];
      }
      for (int b = 0; b < kBinsPerDay; ++b) {
        rec.bins[b] = round_kwh(total * w[b] / wsum);
      }
      data.consumption.push_back(rec);
    }
  }
  return data;
}

void write_synthetic(const SyntheticData& data,
                     const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  {
    auto out = open_output(dir / "events.csv");
    write_events_csv(out, data.events);
  }
  {
    auto out = open_output(dir / "consumption.csv");
    write_consumption_csv(out, data.consumption);
  }
  auto out = open_output(dir / "labels.csv");
  out << "case_id,label\n";
  for (std::size_t i = 0; i < data.case_ids.size(); ++i) {
    out << data.case_ids[i] << ','
        << (data.is_anomaly[i] ? "anomaly" : "background") << '\n';
  }
}

}  // namespace jointrank
