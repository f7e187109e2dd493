#include "gbc/stats.hpp"

#include <ostream>

namespace gbc {

nlohmann::json report_to_json(const CountReport& r) {
  nlohmann::json j;
  j["schema"] = kStatsSchema;
  j["count"] = to_string(r.count);
  j["overflow"] = r.overflow;
  j["time_1hop"] = r.time_1hop;
  j["time_2hop"] = r.time_2hop;
  j["wall_time"] = r.wall_time;
  j["batches_executed"] = r.batches_executed;
  j["expansions"] = r.expansions;
  j["tasks_total"] = r.tasks_total;
  j["tasks_stolen"] = r.tasks_stolen;
  j["roots"] = r.roots;
  j["roots_filtered"] = r.roots_filtered;
  j["worker_count"] = r.worker_count;
  j["anchor"] = layer_name(r.anchor);
  j["p_eff"] = r.p_eff;
  j["q_eff"] = r.q_eff;
  return j;
}

void write_stats(std::ostream& out, const nlohmann::json& stats) { out << stats.dump(2) << '\n'; }

}  // namespace gbc
