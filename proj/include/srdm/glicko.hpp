#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace srdm {

struct PlayerRating {
  std::string method_id;
  double rating = 1500.0;
  double deviation = 350.0;
};

struct VoteRecord {
  std::string winner;
  std::string loser;
};

struct GameResult {
  double opponent_rating;
  double opponent_deviation;
  double score;  // 1 = win, 0 = loss
};

constexpr double kGlickoQ = 0.005756462732485114;  // ln(10) / 400
constexpr double kInitialDeviation = 350.0;

namespace detail {

inline double glicko_g(double rd) {
  return 1.0 / std::sqrt(1.0 + 3.0 * kGlickoQ * kGlickoQ * rd * rd /
                                   (std::numbers::pi * std::numbers::pi));
}

inline double glicko_e(double r, double rj, double g_rdj) {
  return 1.0 / (1.0 + std::pow(10.0, -g_rdj * (r - rj) / 400.0));
}

}  // namespace detail

// One-period Glicko-1 update from a set of game results.
inline PlayerRating glicko_update(const PlayerRating& player,
                                  const std::vector<GameResult>& results) {
  if (results.empty()) throw std::invalid_argument("glicko_update: no results");
  double d2_inv = 0.0;
  double delta_sum = 0.0;
  for (const auto& res : results) {
    double g = detail::glicko_g(res.opponent_deviation);
    double e = detail::glicko_e(player.rating, res.opponent_rating, g);
    d2_inv += kGlickoQ * kGlickoQ * g * g * e * (1.0 - e);
    delta_sum += g * (res.score - e);
  }
  double rd2_inv = 1.0 / (player.deviation * player.deviation) + d2_inv;
  PlayerRating out = player;
  out.rating = player.rating + kGlickoQ / rd2_inv * delta_sum;
  out.deviation = std::sqrt(1.0 / rd2_inv);
  if (!std::isfinite(out.rating) || !std::isfinite(out.deviation))
    throw std::runtime_error("glicko_update: non-finite intermediate");
  return out;
}

enum class RatingPeriod {
  per_vote,   // each vote is a one-game period for both participants
  per_shuffle  // all of a shuffle's votes form one period per player
};

// Glicko rating of pairwise votes: everyone starts at (1500, 350), votes are
// applied in shuffled order, and the whole pass repeats per shuffle with an
// independently permuted order. Final ratings and deviations are per-method
// means over shuffles.
inline std::vector<PlayerRating> rate_tournament(const std::vector<VoteRecord>& votes,
                                                 const std::vector<std::string>& methods,
                                                 int shuffles, std::uint64_t seed,
                                                 RatingPeriod period = RatingPeriod::per_vote) {
  if (votes.empty()) throw std::invalid_argument("rate_tournament: empty vote list");
  if (shuffles < 1) throw std::invalid_argument("rate_tournament: shuffles must be >= 1");
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < methods.size(); ++i) index[methods[i]] = i;
  for (const auto& v : votes) {
    if (!index.count(v.winner) || !index.count(v.loser))
      throw std::invalid_argument("rate_tournament: unknown method in vote: " + v.winner + "/" +
                                  v.loser);
    if (v.winner == v.loser) throw std::invalid_argument("rate_tournament: self-vote");
  }

  std::vector<double> rating_sum(methods.size(), 0.0), dev_sum(methods.size(), 0.0);
  std::mt19937_64 rng(seed);
  std::vector<std::size_t> order(votes.size());

  for (int pass = 0; pass < shuffles; ++pass) {
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::shuffle(order.begin(), order.end(), rng);

    std::vector<PlayerRating> players(methods.size());
    for (std::size_t i = 0; i < methods.size(); ++i) players[i].method_id = methods[i];

    if (period == RatingPeriod::per_vote) {
      for (std::size_t idx : order) {
        const auto& v = votes[idx];
        PlayerRating& w = players[index[v.winner]];
        PlayerRating& l = players[index[v.loser]];
        PlayerRating w_new = glicko_update(w, {{l.rating, l.deviation, 1.0}});
        PlayerRating l_new = glicko_update(l, {{w.rating, w.deviation, 0.0}});
        w = w_new;
        l = l_new;
      }
    } else {
      std::vector<std::vector<GameResult>> games(methods.size());
      for (std::size_t idx : order) {
        const auto& v = votes[idx];
        const PlayerRating& w = players[index[v.winner]];
        const PlayerRating& l = players[index[v.loser]];
        games[index[v.winner]].push_back({l.rating, l.deviation, 1.0});
        games[index[v.loser]].push_back({w.rating, w.deviation, 0.0});
      }
      for (std::size_t i = 0; i < players.size(); ++i)
        if (!games[i].empty()) players[i] = glicko_update(players[i], games[i]);
    }

    for (std::size_t i = 0; i < players.size(); ++i) {
      rating_sum[i] += players[i].rating;
      dev_sum[i] += players[i].deviation;
    }
  }

  std::vector<PlayerRating> out(methods.size());
  for (std::size_t i = 0; i < methods.size(); ++i) {
    out[i].method_id = methods[i];
    out[i].rating = rating_sum[i] / shuffles;
    out[i].deviation = dev_sum[i] / shuffles;
  }
  return out;
}

struct RankedMethod {
  std::string method_id;
  double rating = 0.0;
  double deviation = 0.0;
  double lower_bound = 0.0;  // r - 1.96 sigma
};

// Conservative 95%-interval ranking: descending by r - 1.96 sigma, ties by
// higher rating, then lexical method id.
inline std::vector<RankedMethod> conservative_ranking(const std::vector<PlayerRating>& ratings) {
  if (ratings.empty()) throw std::invalid_argument("conservative_ranking: empty input");
  std::vector<RankedMethod> out;
  out.reserve(ratings.size());
  for (const auto& p : ratings)
    out.push_back({p.method_id, p.rating, p.deviation, p.rating - 1.96 * p.deviation});
  std::sort(out.begin(), out.end(), [](const RankedMethod& a, const RankedMethod& b) {
    if (a.lower_bound != b.lower_bound) return a.lower_bound > b.lower_bound;
    if (a.rating != b.rating) return a.rating > b.rating;
    return a.method_id < b.method_id;
  });
  return out;
}

}  // namespace srdm
