// SPDX-License-Identifier: Apache-2.0
#include "echotk/graph.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <thread>
#include <unordered_map>
#include <unordered_set>

#include "echotk/error.hpp"
#include "echotk/exact_sum.hpp"

namespace echotk {

std::uint64_t BipartiteGraph::edge_count() const {
  std::uint64_t total = 0;
  for (const auto& items : user_items) total += items.size();
  return total;
}

void BipartiteGraph::rebuild_item_side() {
  item_users.assign(item_ids.size(), {});
  for (std::uint32_t u = 0; u < user_items.size(); ++u) {
    const auto& items = user_items[u];
    for (std::size_t i = 0; i < items.size(); ++i) {
      if (items[i] >= item_ids.size()) {
        throw Error("bipartite edge endpoint out of range");
      }
      if (i > 0 && items[i] <= items[i - 1]) {
        throw Error("duplicate or unsorted edge for user \"" + user_ids[u] +
                    "\"");
      }
      item_users[items[i]].push_back(u);
    }
  }
  // Users are visited in ascending order, so the lists come out sorted.
}

namespace {

BipartiteGraph from_tallies(
    const std::map<std::string, std::map<std::string, std::uint64_t>>&
        tallies) {
  BipartiteGraph graph;
  std::map<std::string, std::uint32_t> item_index;
  for (const auto& [user, items] : tallies) {
    for (const auto& [item, count] : items) {
      item_index.emplace(item, 0);
    }
  }
  graph.item_ids.reserve(item_index.size());
  for (auto& [item, index] : item_index) {
    index = static_cast<std::uint32_t>(graph.item_ids.size());
    graph.item_ids.push_back(item);
  }

  graph.user_ids.reserve(tallies.size());
  graph.user_items.reserve(tallies.size());
  graph.edge_weights.reserve(tallies.size());
  for (const auto& [user, items] : tallies) {
    graph.user_ids.push_back(user);
    std::vector<std::uint32_t> adjacency;
    std::vector<std::uint64_t> weights;
    adjacency.reserve(items.size());
    weights.reserve(items.size());
    for (const auto& [item, count] : items) {
      adjacency.push_back(item_index[item]);  // map order -> already sorted
      weights.push_back(count);
    }
    graph.user_items.push_back(std::move(adjacency));
    graph.edge_weights.push_back(std::move(weights));
  }
  graph.rebuild_item_side();
  return graph;
}

}  // namespace

BipartiteGraph build_bipartite(
    const std::vector<UserEngagement>& engagements) {
  if (engagements.empty()) {
    throw Error("build_bipartite: empty engagement collection");
  }
  std::map<std::string, std::map<std::string, std::uint64_t>> tallies;
  for (const auto& engagement : engagements) {
    auto [it, inserted] = tallies.emplace(engagement.user_id,
                                          engagement.per_channel_comments);
    if (!inserted) {
      throw Error("build_bipartite: duplicate user \"" + engagement.user_id +
                  "\"");
    }
  }
  return from_tallies(tallies);
}

BipartiteGraph build_video_bipartite(const std::vector<CommentEvent>& events,
                                     const std::vector<std::string>& users) {
  std::unordered_set<std::string> kept(users.begin(), users.end());
  std::map<std::string, std::map<std::string, std::uint64_t>> tallies;
  for (const auto& user : users) tallies[user];  // keep users without videos
  for (const auto& event : events) {
    if (!kept.count(event.user_id)) continue;
    ++tallies[event.user_id][event.channel_id + '\x1f' + event.video_id];
  }
  std::erase_if(tallies, [](const auto& entry) {
    return entry.second.empty();
  });
  if (tallies.empty()) {
    throw Error("build_video_bipartite: no events for the given users");
  }
  return from_tallies(tallies);
}

std::vector<std::vector<std::uint32_t>> project_users_small(
    const BipartiteGraph& graph, std::size_t max_users) {
  const std::size_t n = graph.user_count();
  if (n > max_users) {
    throw Error("project_users_small: " + std::to_string(n) +
                " users exceed the materialization cap of " +
                std::to_string(max_users) +
                "; use the streaming neighborhood_averages path");
  }
  // Shared-item counts are exactly the entries of B^t B; the projection is
  // their off-diagonal binarization.
  std::vector<std::vector<std::uint32_t>> shared(n,
                                                 std::vector<std::uint32_t>(n));
  for (const auto& commenters : graph.item_users) {
    for (std::size_t a = 0; a < commenters.size(); ++a) {
      for (std::size_t b = a + 1; b < commenters.size(); ++b) {
        ++shared[commenters[a]][commenters[b]];
        ++shared[commenters[b]][commenters[a]];
      }
    }
  }
  std::vector<std::vector<std::uint32_t>> adjacency(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j && shared[i][j] > 0) {
        adjacency[i].push_back(static_cast<std::uint32_t>(j));
      }
    }
  }
  return adjacency;
}

namespace {

struct ItemTotals {
  ExactSum p;
  ExactSum c;
};

unsigned resolve_threads(unsigned requested, std::size_t users) {
  unsigned n = requested == 0 ? std::thread::hardware_concurrency() : requested;
  if (n == 0) n = 1;
  n = std::min<unsigned>(n, 16);
  n = std::min<std::size_t>(n, std::max<std::size_t>(users / 256, 1));
  return n;
}

}  // namespace

std::vector<NeighborhoodStats> neighborhood_averages(
    const BipartiteGraph& graph, const std::vector<UserProfile>& profiles,
    const NeighborhoodOptions& options) {
  const std::size_t n_users = graph.user_count();

  std::unordered_map<std::string, std::size_t> profile_index;
  profile_index.reserve(profiles.size() * 2);
  for (std::size_t i = 0; i < profiles.size(); ++i) {
    profile_index.emplace(profiles[i].user_id, i);
  }
  std::vector<double> p(n_users), c(n_users);
  for (std::size_t u = 0; u < n_users; ++u) {
    const auto it = profile_index.find(graph.user_ids[u]);
    if (it == profile_index.end()) {
      throw Error("neighborhood_averages: no profile for user \"" +
                  graph.user_ids[u] + "\"");
    }
    p[u] = profiles[it->second].p;
    c[u] = profiles[it->second].c;
  }

  // Exact score totals for popular items; combined with an exact
  // subtraction of the user's own score they give single-item users an
  // O(1) answer identical to the streamed union (both are correctly
  // rounded sums of the same neighbor multiset).
  std::vector<std::unique_ptr<ItemTotals>> totals(graph.item_count());
  for (std::size_t i = 0; i < graph.item_count(); ++i) {
    const auto& commenters = graph.item_users[i];
    if (commenters.size() > options.popular_item_cutoff) {
      auto t = std::make_unique<ItemTotals>();
      for (std::uint32_t v : commenters) {
        t->p.add(p[v]);
        t->c.add(c[v]);
      }
      totals[i] = std::move(t);
    }
  }

  std::vector<NeighborhoodStats> stats(n_users);
  auto compute_range = [&](std::size_t begin, std::size_t end) {
    std::vector<std::uint32_t> stamp(n_users, 0);
    std::uint32_t epoch = 0;
    for (std::size_t u = begin; u < end; ++u) {
      NeighborhoodStats& out = stats[u];
      out.user = static_cast<std::uint32_t>(u);
      const auto& items = graph.user_items[u];

      if (items.size() == 1 && totals[items[0]]) {
        const auto& commenters = graph.item_users[items[0]];
        const std::uint64_t k = commenters.size() - 1;
        out.k = k;
        if (k > 0) {
          ExactSum sp = totals[items[0]]->p;
          ExactSum sc = totals[items[0]]->c;
          sp.subtract(p[u]);
          sc.subtract(c[u]);
          out.p_avg = exact_mean(sp, k);
          out.c_avg = exact_mean(sc, k);
        }
        continue;
      }

      ++epoch;
      std::uint64_t k = 0;
      ExactSum sp, sc;
      for (std::uint32_t item : items) {
        for (std::uint32_t v : graph.item_users[item]) {
          if (v == u || stamp[v] == epoch) continue;
          stamp[v] = epoch;
          ++k;
          sp.add(p[v]);
          sc.add(c[v]);
        }
      }
      out.k = k;
      if (k > 0) {
        out.p_avg = exact_mean(sp, k);
        out.c_avg = exact_mean(sc, k);
      }
    }
  };

  const unsigned n_threads = resolve_threads(options.threads, n_users);
  if (n_threads <= 1) {
    compute_range(0, n_users);
  } else {
    std::vector<std::thread> workers;
    const std::size_t chunk = (n_users + n_threads - 1) / n_threads;
    for (unsigned t = 0; t < n_threads; ++t) {
      const std::size_t begin = t * chunk;
      const std::size_t end = std::min(n_users, begin + chunk);
      if (begin >= end) break;
      workers.emplace_back(compute_range, begin, end);
    }
    for (auto& worker : workers) worker.join();
  }
  return stats;
}

void attach_neighborhood_stats(const BipartiteGraph& graph,
                               const std::vector<NeighborhoodStats>& stats,
                               std::vector<UserProfile>& profiles) {
  std::unordered_map<std::string, std::size_t> profile_index;
  profile_index.reserve(profiles.size() * 2);
  for (std::size_t i = 0; i < profiles.size(); ++i) {
    profile_index.emplace(profiles[i].user_id, i);
  }
  for (const auto& stat : stats) {
    const auto it = profile_index.find(graph.user_ids[stat.user]);
    if (it == profile_index.end()) continue;
    UserProfile& profile = profiles[it->second];
    profile.k_projection_degree = stat.k;
    profile.p_neighborhood = stat.p_avg;
    profile.c_neighborhood = stat.c_avg;
  }
}

}  // namespace echotk
