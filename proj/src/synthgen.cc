// Copyright 2026 The LISTA Design Space Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "lista/synthgen.h"

#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>
#include <vector>

#include "lista/container.h"
#include "lista/rng.h"

namespace lista {

namespace {

constexpr std::uint64_t kStreamU = 1;
constexpr std::uint64_t kStreamV = 2;
constexpr std::uint64_t kSignalChild = 11;
constexpr std::uint64_t kNoiseChild = 12;

double parse_double(const std::string& s, const std::string& what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    fail(ErrorKind::kInvalidArgument, "cannot parse " + what + " from '" + s + "'");
  }
}

// Splits "kind:a,b" into kind and its numeric arguments.
std::pair<std::string, std::vector<double>> split_spec(const std::string& text) {
  const auto colon = text.find(':');
  std::pair<std::string, std::vector<double>> out;
  out.first = text.substr(0, colon);
  if (colon == std::string::npos) return out;
  std::stringstream ss(text.substr(colon + 1));
  std::string item;
  while (std::getline(ss, item, ',')) {
    out.second.push_back(parse_double(item, "spec argument"));
  }
  return out;
}

Matrix gaussian_matrix(int rows, int cols, double stddev, std::uint64_t seed) {
  Matrix out(rows, cols);
  for (int j = 0; j < cols; ++j) {
    CounterRng rng(seed, static_cast<std::uint64_t>(j));
    for (int i = 0; i < rows; ++i) out(i, j) = stddev * rng.normal();
  }
  return out;
}

}  // namespace

std::string gen_spec_to_string(const GenSpec& g) {
  struct Visitor {
    std::string operator()(const GaussianGen&) const { return "gaussian"; }
    std::string operator()(const LowRankGen& l) const {
      return "lowrank:" + std::to_string(l.rank);
    }
    std::string operator()(const PerturbedGen& p) const {
      return "perturbed:" + p.base_id + "," + format_double(p.scale);
    }
  };
  return std::visit(Visitor{}, g);
}

void normalize_columns(Matrix& d) {
  for (Eigen::Index j = 0; j < d.cols(); ++j) {
    const double norm = d.col(j).norm();
    if (!(norm > 0.0) || !std::isfinite(norm)) {
      fail(ErrorKind::kNumeric, "cannot normalize column " + std::to_string(j));
    }
    d.col(j) /= norm;
  }
}

Dictionary sample_dictionary(int m, int n, std::uint64_t seed) {
  require(m >= 1 && n >= 1, "sample_dictionary: dimensions must be >= 1");
  Dictionary d{m, n, gaussian_matrix(m, n, 1.0 / std::sqrt(double(m)), seed),
               GaussianGen{}, seed};
  normalize_columns(d.data);
  return d;
}

Dictionary sample_lowrank_dictionary(int m, int r, int n, std::uint64_t seed) {
  require(m >= 1 && n >= 1, "sample_lowrank_dictionary: dimensions must be >= 1");
  require(r >= 1 && r <= std::min(m, n),
          "sample_lowrank_dictionary: rank must lie in [1, min(m, n)]");
  const Matrix u =
      gaussian_matrix(m, r, 1.0 / std::sqrt(double(m)), mix_seeds(seed, kStreamU));
  const Matrix v =
      gaussian_matrix(r, n, 1.0 / std::sqrt(double(r)), mix_seeds(seed, kStreamV));
  Dictionary d{m, n, u * v, LowRankGen{r}, seed};
  normalize_columns(d.data);
  return d;
}

Dictionary perturb_dictionary(const Dictionary& base, double scale,
                              std::uint64_t seed) {
  require(scale > 0.0, "perturb_dictionary: scale must be positive");
  Dictionary d{base.m, base.n, base.data, PerturbedGen{base.id(), scale}, seed};
  for (int j = 0; j < d.n; ++j) {
    CounterRng rng(seed, static_cast<std::uint64_t>(j));
    for (int i = 0; i < d.m; ++i) d.data(i, j) += rng.laplace(scale);
  }
  normalize_columns(d.data);
  return d;
}

std::string signal_to_string(const SignalSpec& s) {
  if (const auto* b = std::get_if<BernoulliGauss>(&s)) {
    return "bernoulli:" + format_double(b->p);
  }
  const auto& g = std::get<GammaSignal>(s);
  return "gamma:" + format_double(g.shape) + "," + format_double(g.scale);
}

SignalSpec parse_signal(const std::string& text) {
  const auto [kind, args] = split_spec(text);
  if (kind == "bernoulli" && args.size() == 1) {
    require(args[0] > 0.0 && args[0] <= 1.0, "bernoulli p must lie in (0, 1]");
    return BernoulliGauss{args[0]};
  }
  if (kind == "gamma" && args.size() == 2) {
    require(args[0] > 0.0 && args[1] > 0.0, "gamma shape and scale must be > 0");
    return GammaSignal{args[0], args[1]};
  }
  fail(ErrorKind::kInvalidArgument, "unknown signal spec '" + text + "'");
}

std::string noise_to_string(const NoiseSpec& s) {
  if (std::holds_alternative<NoNoise>(s)) return "none";
  if (const auto* g = std::get_if<GaussianNoise>(&s)) {
    return "gaussian:" + format_double(g->snr_db);
  }
  return "salt_pepper:" + format_double(std::get<SaltPepperNoise>(s).density);
}

NoiseSpec parse_noise(const std::string& text) {
  const auto [kind, args] = split_spec(text);
  if (kind == "none" && args.empty()) return NoNoise{};
  if (kind == "gaussian" && args.size() == 1) {
    require(std::isfinite(args[0]), "gaussian snr_db must be finite");
    return GaussianNoise{args[0]};
  }
  if ((kind == "salt_pepper" || kind == "sp") && args.size() == 1) {
    require(args[0] >= 0.0 && args[0] <= 1.0, "salt_pepper density must lie in [0, 1]");
    return SaltPepperNoise{args[0]};
  }
  fail(ErrorKind::kInvalidArgument, "unknown noise spec '" + text + "'");
}

Matrix sample_signals(int n, int count, const SignalSpec& spec,
                      std::uint64_t seed) {
  require(n >= 1 && count >= 1, "sample_signals: n and count must be >= 1");
  Matrix x(n, count);
  if (const auto* b = std::get_if<BernoulliGauss>(&spec)) {
    require(b->p > 0.0 && b->p <= 1.0, "bernoulli p must lie in (0, 1]");
    for (int j = 0; j < count; ++j) {
      CounterRng rng(seed, static_cast<std::uint64_t>(j));
      for (int i = 0; i < n; ++i) {
        x(i, j) = rng.bernoulli(b->p) ? rng.normal() : 0.0;
      }
    }
  } else {
    const auto& g = std::get<GammaSignal>(spec);
    require(g.shape > 0.0 && g.scale > 0.0, "gamma shape and scale must be > 0");
    for (int j = 0; j < count; ++j) {
      CounterRng rng(seed, static_cast<std::uint64_t>(j));
      for (int i = 0; i < n; ++i) x(i, j) = rng.gamma(g.shape, g.scale);
    }
  }
  return x;
}

Matrix synthesize_measurements(const Dictionary& d, const Matrix& x,
                               const NoiseSpec& noise, std::uint64_t seed) {
  require(x.rows() == d.n, "synthesize_measurements: signal dimension " +
                               std::to_string(x.rows()) + " != dictionary columns " +
                               std::to_string(d.n));
  Matrix b = d.data * x;
  if (const auto* g = std::get_if<GaussianNoise>(&noise)) {
    const double per_entry = b.squaredNorm() / static_cast<double>(b.size());
    const double sigma = std::sqrt(per_entry * std::pow(10.0, -g->snr_db / 10.0));
    for (Eigen::Index j = 0; j < b.cols(); ++j) {
      CounterRng rng(seed, static_cast<std::uint64_t>(j));
      for (Eigen::Index i = 0; i < b.rows(); ++i) b(i, j) += sigma * rng.normal();
    }
  } else if (const auto* sp = std::get_if<SaltPepperNoise>(&noise)) {
    const double amp = b.cwiseAbs().maxCoeff();
    const auto total = static_cast<std::uint64_t>(b.size());
    const auto k = static_cast<std::uint64_t>(
        std::llround(sp->density * static_cast<double>(total)));
    // Partial Fisher-Yates over flat indices.
    std::vector<std::uint64_t> idx(total);
    std::iota(idx.begin(), idx.end(), std::uint64_t{0});
    CounterRng rng(seed, 0);
    for (std::uint64_t t = 0; t < k; ++t) {
      std::swap(idx[t], idx[t + rng.below(total - t)]);
      b.data()[idx[t]] = (t < k / 2) ? amp : -amp;
    }
  }
  return b;
}

std::string split_name(Split s) {
  switch (s) {
    case Split::kTrain:
      return "train";
    case Split::kVal:
      return "val";
    case Split::kTest:
      return "test";
  }
  return "?";
}

Split parse_split(const std::string& text) {
  if (text == "train") return Split::kTrain;
  if (text == "val") return Split::kVal;
  if (text == "test") return Split::kTest;
  fail(ErrorKind::kInvalidArgument, "unknown split '" + text + "'");
}

std::uint64_t Dataset::content_hash() const {
  std::uint64_t h = fnv1a64(dict_id);
  h = fnv1a64(signal_to_string(signal), h);
  h = fnv1a64(noise_to_string(noise), h);
  h = fnv1a64(std::to_string(seed) + split_name(split), h);
  h = matrix_hash(x_true, h);
  return matrix_hash(b, h);
}

Dataset make_dataset(const Dictionary& d, int count, const SignalSpec& signal,
                     const NoiseSpec& noise, std::uint64_t seed, Split split,
                     bool embed_dictionary) {
  Dataset ds;
  ds.dict_id = d.id();
  ds.x_true = sample_signals(d.n, count, signal, mix_seeds(seed, kSignalChild));
  ds.b = synthesize_measurements(d, ds.x_true, noise, mix_seeds(seed, kNoiseChild));
  ds.signal = signal;
  ds.noise = noise;
  ds.seed = seed;
  ds.split = split;
  if (embed_dictionary) ds.dictionary = d;
  return ds;
}

void check_dataset_matches(const Dataset& ds, const Dictionary& d) {
  require(ds.dict_id == d.id(),
          "dataset was generated from dictionary " + ds.dict_id + ", not " + d.id());
  require(ds.x_true.rows() == d.n && ds.b.rows() == d.m &&
              ds.x_true.cols() == ds.b.cols() && ds.count() >= 1,
          "dataset shapes do not match the dictionary");
}

void write_dataset(const Dataset& ds, const std::filesystem::path& path) {
  Json h;
  h["format"] = "USRD";
  h["rng"] = CounterRng::kName;
  h["dict_id"] = ds.dict_id;
  h["n"] = ds.x_true.rows();
  h["m"] = ds.b.rows();
  h["count"] = ds.x_true.cols();
  h["signal"] = signal_to_string(ds.signal);
  h["noise"] = noise_to_string(ds.noise);
  h["seed"] = ds.seed;
  h["split"] = split_name(ds.split);
  std::vector<NamedMatrix> arrays = {{"x_true", ds.x_true}, {"b", ds.b}};
  if (ds.dictionary) {
    h["dictionary"] = {{"gen", gen_spec_to_string(ds.dictionary->gen)},
                       {"seed", ds.dictionary->seed}};
    arrays.push_back({"dictionary", ds.dictionary->data});
  }
  write_file(path, encode_container("USRD", kDatasetVersion, std::move(h), arrays));
}

namespace {

GenSpec parse_gen_spec(const std::string& text) {
  if (text == "gaussian") return GaussianGen{};
  if (text.rfind("lowrank:", 0) == 0) return LowRankGen{std::stoi(text.substr(8))};
  if (text.rfind("perturbed:", 0) == 0) {
    const std::string rest = text.substr(10);
    const auto comma = rest.find(',');
    return PerturbedGen{rest.substr(0, comma),
                        parse_double(rest.substr(comma + 1), "perturbation scale")};
  }
  fail(ErrorKind::kFormat, "unknown dictionary generator '" + text + "'");
}

}  // namespace

Dataset read_dataset(const std::filesystem::path& path) {
  const Container c = decode_container(read_file(path), "USRD", kDatasetVersion);
  Dataset ds;
  try {
    const Json& h = c.header;
    ds.dict_id = h.at("dict_id").get<std::string>();
    ds.signal = parse_signal(h.at("signal").get<std::string>());
    ds.noise = parse_noise(h.at("noise").get<std::string>());
    ds.seed = h.at("seed").get<std::uint64_t>();
    ds.split = parse_split(h.at("split").get<std::string>());
    ds.x_true = c.array("x_true");
    ds.b = c.array("b");
    if (h.contains("dictionary")) {
      Dictionary d;
      d.data = c.array("dictionary");
      d.m = static_cast<int>(d.data.rows());
      d.n = static_cast<int>(d.data.cols());
      d.gen = parse_gen_spec(h["dictionary"].at("gen").get<std::string>());
      d.seed = h["dictionary"].at("seed").get<std::uint64_t>();
      ds.dictionary = std::move(d);
    }
  } catch (const Json::exception& e) {
    fail(ErrorKind::kFormat, std::string("malformed dataset header: ") + e.what());
  } catch (const Error& e) {
    fail(ErrorKind::kFormat, std::string("malformed dataset header: ") + e.what());
  }
  if (ds.x_true.cols() != ds.b.cols() || ds.x_true.cols() < 1) {
    fail(ErrorKind::kFormat, "dataset arrays have inconsistent shapes");
  }
  return ds;
}

}  // namespace lista
