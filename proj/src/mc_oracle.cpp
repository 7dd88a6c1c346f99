// Copyright 2026 The mmimo Authors
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

#include "mmimo/mc_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>
#include <stdexcept>
#include <string>

#include <boost/random/normal_distribution.hpp>

namespace mmimo {

namespace {

using cd = std::complex<double>;

std::mt19937_64 stream_engine(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream),
                    static_cast<std::uint32_t>(stream >> 32), 0x6d63u};
  return std::mt19937_64(seq);
}

// Draws CN(0, variance) entries.
class ComplexNormal {
 public:
  cd operator()(std::mt19937_64& rng, double variance) {
    const double s = std::sqrt(0.5 * variance);
    const double re = normal_(rng);
    const double im = normal_(rng);
    return {s * re, s * im};
  }

 private:
  boost::random::normal_distribution<double> normal_{0.0, 1.0};
};

// Users grouped by pilot; the group representative is its smallest index.
std::vector<std::vector<int>> pilot_groups(const PilotSets& sets) {
  std::vector<std::vector<int>> groups;
  for (std::size_t k = 0; k < sets.size(); ++k) {
    const int first = *std::min_element(sets[k].begin(), sets[k].end());
    if (first == static_cast<int>(k)) groups.push_back(sets[k]);
  }
  return groups;
}

class PilotPipeline {
 public:
  explicit PilotPipeline(const NetworkRealization& net)
      : net_(net), groups_(pilot_groups(net.pilot_sets)) {
    const int L = net.num_bs();
    const int K = net.num_users();
    const NetworkConfig& cfg = net.config;
    scale_.resize(L, K);
    for (int l = 0; l < L; ++l) {
      for (int k = 0; k < K; ++k) {
        double load = 0.0;
        for (int t : net.pilot_sets[k]) load += cfg.pilot_power[t] * net.beta(l, t);
        scale_(l, k) = std::sqrt(cfg.pilot_power[k]) * net.beta(l, k) /
                       (cfg.pilot_length * load + cfg.ul_noise);
      }
    }
  }

  void draw(std::mt19937_64& rng, ChannelSample& out) {
    const int L = net_.num_bs();
    const int K = net_.num_users();
    const int M = net_.config.antennas_per_bs;
    const double tau = net_.config.pilot_length;
    const double noise_var = tau * net_.config.ul_noise;
    out.channel.resize(L);
    out.estimate.resize(L);
    Eigen::VectorXcd received(M);
    for (int l = 0; l < L; ++l) {
      Eigen::MatrixXcd& h = out.channel[l];
      h.resize(M, K);
      for (int k = 0; k < K; ++k) {
        const double beta = net_.beta(l, k);
        for (int a = 0; a < M; ++a) h(a, k) = cn_(rng, beta);
      }
      Eigen::MatrixXcd& est = out.estimate[l];
      est.resize(M, K);
      for (const auto& group : groups_) {
        for (int a = 0; a < M; ++a) received(a) = cn_(rng, noise_var);
        for (int t : group) received += tau * std::sqrt(net_.config.pilot_power[t]) * h.col(t);
        for (int k : group) est.col(k) = scale_(l, k) * received;
      }
    }
  }

 private:
  const NetworkRealization& net_;
  std::vector<std::vector<int>> groups_;
  Eigen::MatrixXd scale_;
  ComplexNormal cn_;
};

void check_zf_pilots(const NetworkRealization& net) {
  for (const auto& set : net.pilot_sets) {
    if (set.size() > 1) {
      throw std::invalid_argument(
          "ZF Monte Carlo needs distinct pilots: shared pilots make the estimates collinear");
    }
  }
}

// G = H^H W for every scheme without forming W: with C = H^H Hhat,
// MRT gives C D and ZF gives C (Hhat^H Hhat)^{-1} D for the diagonal
// normalizations D.
class GainKernel {
 public:
  GainKernel(const NetworkRealization& net, const std::vector<Precoding>& schemes)
      : schemes_(schemes) {
    const int L = net.num_bs();
    for (Precoding scheme : schemes) {
      const double gain = array_gain(net.config, scheme);
      Eigen::MatrixXd d(L, net.num_users());
      for (int l = 0; l < L; ++l) {
        for (int t = 0; t < net.num_users(); ++t) {
          d(l, t) = scheme == Precoding::mrt ? 1.0 / std::sqrt(gain * net.theta(l, t))
                                             : std::sqrt(gain * net.theta(l, t));
        }
      }
      norms_.push_back(std::move(d));
    }
  }

  // Fills g[j] for scheme j; throws RankDeficientError on a singular Gram.
  void compute(int bs, const ChannelSample& sample, std::vector<Eigen::MatrixXcd>& g) {
    const Eigen::MatrixXcd& est = sample.estimate[bs];
    cross_.noalias() = sample.channel[bs].adjoint() * est;
    for (std::size_t j = 0; j < schemes_.size(); ++j) {
      const auto d = norms_[j].row(bs).transpose().asDiagonal();
      if (schemes_[j] == Precoding::mrt) {
        g[j].noalias() = cross_ * d;
        continue;
      }
      const int K = static_cast<int>(est.cols());
      gram_.setZero(K, K);
      gram_.selfadjointView<Eigen::Lower>().rankUpdate(est.adjoint());
      Eigen::LLT<Eigen::MatrixXcd> llt(gram_);
      if (llt.info() != Eigen::Success) {
        throw RankDeficientError("ZF: estimated Gram matrix of BS " + std::to_string(bs) +
                                 " is not positive definite");
      }
      // C Gram^{-1} = (Gram^{-1} C^H)^H since Gram is Hermitian.
      g[j].noalias() = llt.solve(cross_.adjoint()).adjoint() * d;
    }
  }

 private:
  std::vector<Precoding> schemes_;
  std::vector<Eigen::MatrixXd> norms_;
  Eigen::MatrixXcd cross_;
  Eigen::MatrixXcd gram_;
};

// Per-stream sums of G = H^H W, G(k, t) = h_k^H w_t.
struct Sums {
  Eigen::MatrixXcd gain;
  std::vector<Eigen::MatrixXd> power;
  std::vector<Eigen::MatrixXd> power_sq;
  long count = 0;

  Sums(int L, int K)
      : gain(Eigen::MatrixXcd::Zero(L, K)),
        power(L, Eigen::MatrixXd::Zero(K, K)),
        power_sq(L, Eigen::MatrixXd::Zero(K, K)) {}

  void add(int bs, const Eigen::MatrixXcd& g) {
    gain.row(bs) += g.diagonal().transpose();
    const Eigen::MatrixXd p = g.cwiseAbs2();
    power[bs] += p;
    power_sq[bs] += p.cwiseAbs2();
  }

  void merge(const Sums& other) {
    gain += other.gain;
    for (std::size_t i = 0; i < power.size(); ++i) {
      power[i] += other.power[i];
      power_sq[i] += other.power_sq[i];
    }
    count += other.count;
  }
};

GainStatistics means_of(const Sums& s) {
  GainStatistics g;
  const double n = static_cast<double>(s.count);
  g.mean_gain = s.gain / n;
  for (const auto& p : s.power) g.second_moment.push_back(p / n);
  return g;
}

EmpiricalGainStatistics finish(Precoding scheme, const Sums& total,
                               const std::vector<Sums>& groups) {
  EmpiricalGainStatistics out;
  out.scheme = scheme;
  out.num_samples = total.count;
  out.mean = means_of(total);
  const double n = static_cast<double>(total.count);
  const int L = static_cast<int>(total.power.size());
  out.mean_gain_std_error.resize(L, total.gain.cols());
  for (int i = 0; i < L; ++i) {
    for (Eigen::Index k = 0; k < total.gain.cols(); ++k) {
      const double var = out.mean.second_moment[i](k, k) - std::norm(out.mean.mean_gain(i, k));
      out.mean_gain_std_error(i, k) = std::sqrt(std::max(0.0, var) / n);
    }
    const Eigen::MatrixXd m2 = out.mean.second_moment[i];
    const Eigen::MatrixXd var = (total.power_sq[i] / n - m2.cwiseAbs2()).cwiseMax(0.0);
    out.second_moment_std_error.push_back((var / n).cwiseSqrt());
  }
  for (const Sums& g : groups) {
    if (g.count == 0) continue;
    out.group_means.push_back(means_of(g));
    out.group_sizes.push_back(g.count);
  }
  return out;
}

}  // namespace

ChannelBatch sample_pilot_pipeline(const NetworkRealization& net, int num_samples,
                                   std::uint64_t seed) {
  if (num_samples < 1) throw std::invalid_argument("sample_pilot_pipeline: need N >= 1");
  PilotPipeline pipeline(net);
  ChannelBatch batch;
  batch.samples.resize(num_samples);
  std::mt19937_64 rng;
  for (int n = 0; n < num_samples; ++n) {
    if (n % kSamplesPerStream == 0) rng = stream_engine(seed, n / kSamplesPerStream);
    pipeline.draw(rng, batch.samples[n]);
  }
  return batch;
}

Eigen::MatrixXcd precoders(const NetworkRealization& net, int bs,
                           const Eigen::MatrixXcd& estimate, Precoding scheme) {
  const int K = net.num_users();
  const double gain = array_gain(net.config, scheme);
  if (scheme == Precoding::mrt) {
    Eigen::VectorXd norm(K);
    for (int t = 0; t < K; ++t) norm(t) = 1.0 / std::sqrt(gain * net.theta(bs, t));
    return estimate * norm.asDiagonal();
  }
  check_zf_pilots(net);
  const Eigen::MatrixXcd gram = estimate.adjoint() * estimate;
  Eigen::LLT<Eigen::MatrixXcd> llt(gram);
  if (llt.info() != Eigen::Success) {
    throw RankDeficientError("ZF: estimated Gram matrix of BS " + std::to_string(bs) +
                             " is not positive definite");
  }
  Eigen::VectorXd norm(K);
  for (int t = 0; t < K; ++t) norm(t) = std::sqrt(gain * net.theta(bs, t));
  return estimate * llt.solve(Eigen::MatrixXcd(norm.asDiagonal().toDenseMatrix().cast<cd>()));
}

std::vector<std::vector<Eigen::MatrixXcd>> build_precoders(const NetworkRealization& net,
                                                           const ChannelBatch& batch,
                                                           Precoding scheme) {
  std::vector<std::vector<Eigen::MatrixXcd>> out(batch.size());
  for (int n = 0; n < batch.size(); ++n) {
    for (int l = 0; l < net.num_bs(); ++l) {
      out[n].push_back(precoders(net, l, batch.samples[n].estimate[l], scheme));
    }
  }
  return out;
}

std::vector<EmpiricalGainStatistics> empirical_gain_statistics(
    const NetworkRealization& net, const std::vector<Precoding>& schemes,
    std::uint64_t seed, const McOptions& options) {
  if (options.num_samples < 1 || options.num_groups < 1) {
    throw std::invalid_argument("empirical_gain_statistics: need N >= 1 and >= 1 group");
  }
  const int L = net.num_bs();
  const int K = net.num_users();
  const int S = static_cast<int>((options.num_samples + kSamplesPerStream - 1) / kSamplesPerStream);
  const int num_schemes = static_cast<int>(schemes.size());
  for (Precoding scheme : schemes) {
    array_gain(net.config, scheme);
    if (scheme == Precoding::zf) check_zf_pilots(net);
  }

  std::vector<std::vector<Sums>> per_stream(S, std::vector<Sums>(num_schemes, Sums(L, K)));
  std::vector<int> redraws(S, 0);
  bool failed = false;
  std::string failure;

#pragma omp parallel for schedule(dynamic) if (options.parallel)
  for (int s = 0; s < S; ++s) {
    try {
      PilotPipeline pipeline(net);
      std::mt19937_64 rng = stream_engine(seed, s);
      const long begin = static_cast<long>(s) * kSamplesPerStream;
      const long end = std::min<long>(begin + kSamplesPerStream, options.num_samples);
      GainKernel kernel(net, schemes);
      ChannelSample sample;
      std::vector<std::vector<Eigen::MatrixXcd>> g(L, std::vector<Eigen::MatrixXcd>(num_schemes));
      for (long n = begin; n < end; ++n) {
        // A singular Gram matrix has probability zero; redraw the sample.
        while (true) {
          pipeline.draw(rng, sample);
          try {
            for (int l = 0; l < L; ++l) kernel.compute(l, sample, g[l]);
            break;
          } catch (const RankDeficientError&) {
            if (++redraws[s] > 100) throw;
          }
        }
        for (int j = 0; j < num_schemes; ++j) {
          for (int l = 0; l < L; ++l) per_stream[s][j].add(l, g[l][j]);
        }
        for (int j = 0; j < num_schemes; ++j) ++per_stream[s][j].count;
      }
    } catch (const std::exception& e) {
#pragma omp critical
      {
        failed = true;
        failure = e.what();
      }
    }
  }
  if (failed) throw std::runtime_error("empirical_gain_statistics: " + failure);

  const int G = std::min(options.num_groups, S);
  std::vector<EmpiricalGainStatistics> out;
  for (int j = 0; j < num_schemes; ++j) {
    Sums total(L, K);
    std::vector<Sums> groups(G, Sums(L, K));
    for (int s = 0; s < S; ++s) {
      const int g = static_cast<int>(static_cast<long>(s) * G / S);
      groups[g].merge(per_stream[s][j]);
    }
    for (const Sums& g : groups) total.merge(g);
    out.push_back(finish(schemes[j], total, groups));
  }
  return out;
}

EmpiricalGainStatistics empirical_gain_statistics(const NetworkRealization& net,
                                                  const ChannelBatch& batch,
                                                  Precoding scheme) {
  Sums total(net.num_bs(), net.num_users());
  for (const ChannelSample& sample : batch.samples) {
    for (int l = 0; l < net.num_bs(); ++l) {
      total.add(l, sample.channel[l].adjoint() * precoders(net, l, sample.estimate[l], scheme));
    }
    ++total.count;
  }
  return finish(scheme, total, {total});
}

SinrEstimate empirical_sinr(const EmpiricalGainStatistics& stats,
                            const PowerAllocation& rho, double dl_noise) {
  SinrEstimate out;
  out.sinr = sinr_general(stats.mean, rho, dl_noise);
  const int G = static_cast<int>(stats.group_means.size());
  out.std_error = Eigen::VectorXd::Zero(out.sinr.size());
  if (G < 2) return out;

  const double n = static_cast<double>(stats.num_samples);
  const int L = stats.mean.num_bs();
  std::vector<Eigen::VectorXd> leave_out;
  Eigen::VectorXd avg = Eigen::VectorXd::Zero(out.sinr.size());
  for (int g = 0; g < G; ++g) {
    const double ng = static_cast<double>(stats.group_sizes[g]);
    const double rest = n - ng;
    GainStatistics loo;
    loo.mean_gain = (n * stats.mean.mean_gain - ng * stats.group_means[g].mean_gain) / rest;
    for (int i = 0; i < L; ++i) {
      loo.second_moment.push_back(
          (n * stats.mean.second_moment[i] - ng * stats.group_means[g].second_moment[i]) / rest);
    }
    leave_out.push_back(sinr_general(loo, rho, dl_noise));
    avg += leave_out.back();
  }
  avg /= G;
  for (const auto& v : leave_out) out.std_error += (v - avg).cwiseAbs2();
  out.std_error = (out.std_error * (G - 1.0) / G).cwiseSqrt();
  return out;
}

}  // namespace mmimo
