#include "emac/harness/report.hpp"

#include <fstream>
#include <map>
#include <ostream>
#include <stdexcept>
#include <tuple>
#include <vector>

#include "emac/csv.hpp"

namespace emac::harness {
namespace {

using GroupKey = std::tuple<std::string, double, int>;

GroupKey key_of(const ProtocolRecord& r) { return {r.solution, r.tbler, r.sdus}; }

/// Successful records grouped by (solution, tbler, P), groups in order of
/// first appearance.
std::vector<std::vector<const ProtocolRecord*>> groups(std::span<const ProtocolRecord> records) {
  std::map<GroupKey, std::size_t> index;
  std::vector<std::vector<const ProtocolRecord*>> out;
  for (const auto& r : records) {
    if (!r.ok()) continue;
    const auto [it, inserted] = index.emplace(key_of(r), out.size());
    if (inserted) out.emplace_back();
    out[it->second].push_back(&r);
  }
  return out;
}

std::vector<std::string> key_fields(const ProtocolRecord& r) {
  return {r.solution, csv::format_double(r.tbler), std::to_string(r.sdus)};
}

}  // namespace

void write_detail(std::ostream& out, std::span<const ProtocolRecord> records) {
  csv::write_row(out, {"solution", "tbler", "P", "repetition", "train_episode", "goodput",
                       "delivery_rate", "duration"});
  for (const auto& r : records) {
    if (!r.ok()) continue;
    for (const auto& p : r.eval_trace) {
      csv::write_row(out, {r.solution, csv::format_double(r.tbler), std::to_string(r.sdus),
                           std::to_string(r.repetition), std::to_string(p.train_episode),
                           csv::format_double(p.mean_goodput), csv::format_double(p.mean_delivery_rate),
                           csv::format_double(p.mean_duration)});
    }
  }
}

void write_summary(std::ostream& out, std::span<const ProtocolRecord> records) {
  csv::write_row(out, {"solution", "tbler", "P", "repetitions", "best_repetition", "best_goodput",
                       "mean_final_goodput", "final_goodput_ci95", "best_test_goodput",
                       "best_test_delivery_rate", "best_test_duration", "ci_method"});
  for (const auto& group : groups(records)) {
    std::vector<ProtocolRecord> members;
    std::vector<double> finals;
    for (const auto* r : group) {
      members.push_back(*r);
      finals.push_back(r->final_goodput);
    }
    const ProtocolRecord& best = select_best(members);
    const MeanCi ci = mean_ci(finals);
    auto row = key_fields(best);
    for (auto field : {std::to_string(group.size()), std::to_string(best.repetition),
                       csv::format_double(best.final_goodput), csv::format_double(ci.mean),
                       csv::format_double(ci.half_width), csv::format_double(best.test_goodput),
                       csv::format_double(best.test_delivery_rate),
                       csv::format_double(best.test_duration), std::string("normal95")}) {
      row.push_back(std::move(field));
    }
    csv::write_row(out, row);
  }
}

void write_curves(std::ostream& out, std::span<const ProtocolRecord> records) {
  csv::write_row(out, {"solution", "tbler", "P", "train_episode", "repetitions", "goodput",
                       "goodput_ci95", "delivery_rate", "delivery_rate_ci95", "duration",
                       "duration_ci95"});
  for (const auto& group : groups(records)) {
    std::map<int, std::vector<const marl::EvalPoint*>> by_episode;
    for (const auto* r : group) {
      for (const auto& p : r->eval_trace) by_episode[p.train_episode].push_back(&p);
    }
    for (const auto& [episode, points] : by_episode) {
      std::vector<double> g, d, t;
      for (const auto* p : points) {
        g.push_back(p->mean_goodput);
        d.push_back(p->mean_delivery_rate);
        t.push_back(p->mean_duration);
      }
      const MeanCi cg = mean_ci(g), cd = mean_ci(d), ct = mean_ci(t);
      auto row = key_fields(*group.front());
      for (auto field : {std::to_string(episode), std::to_string(points.size()),
                         csv::format_double(cg.mean), csv::format_double(cg.half_width),
                         csv::format_double(cd.mean), csv::format_double(cd.half_width),
                         csv::format_double(ct.mean), csv::format_double(ct.half_width)}) {
        row.push_back(std::move(field));
      }
      csv::write_row(out, row);
    }
  }
}

void emit_report(std::span<const ProtocolRecord> records, const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);
  auto emit = [&out_dir](const char* name, auto&& writer) {
    const auto path = out_dir / name;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    writer(out);
    out.flush();
    if (!out) throw std::runtime_error("failed writing " + path.string());
  };
  emit("detail.csv", [&](std::ostream& o) { write_detail(o, records); });
  emit("summary.csv", [&](std::ostream& o) { write_summary(o, records); });
  emit("curves.csv", [&](std::ostream& o) { write_curves(o, records); });
}

}  // namespace emac::harness
