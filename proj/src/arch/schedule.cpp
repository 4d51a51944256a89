#include "fsd/arch/schedule.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <set>
#include <sstream>

#include "fsd/errors.hpp"

namespace fsd::arch {

std::string to_string(const GroupId& g) {
  return "G" + std::to_string(g.level) + "." + std::to_string(g.column);
}

const char* to_string(HazardKind kind) {
  switch (kind) {
    case HazardKind::kReadBeforeWrite:
      return "read-before-write";
    case HazardKind::kOverwritten:
      return "overwritten";
    case HazardKind::kSharedGroup:
      return "shared-group";
    case HazardKind::kWriteConflict:
      return "write-conflict";
  }
  return "unknown";
}

Schedule build_schedule(int levels, int parallelism, const NodeDistribution& dist) {
  if (levels < 3) throw ConfigError("schedule needs at least three tree levels");
  if (parallelism != 4 && parallelism != 8) {
    throw ConfigError("parallelism must be 4 or 8, got " + std::to_string(parallelism));
  }
  if (dist != NodeDistribution::standard(levels, kGroupSize)) {
    throw ConfigError("the architecture schedule supports only the distribution " +
                      NodeDistribution::standard(levels, kGroupSize).to_string() + ", got " +
                      dist.to_string());
  }
  const int top = levels - 1;
  const int per_bundle = parallelism / kGroupSize;  // columns handled per cycle
  const int bundles = kColumns / per_bundle;
  const int cycles = 1 + (levels - 1) * bundles;

  Schedule schedule(cycles);
  for (int t = 0; t < cycles; ++t) schedule[t].cycle = t + 1;
  auto bundle_groups = [&](int level, int bundle) {
    std::vector<GroupId> groups;
    for (int k = 0; k < per_bundle; ++k) groups.push_back({level, bundle * per_bundle + k + 1});
    return groups;
  };

  schedule[0].d = {{top, 1}};
  for (int c = 1; c <= kColumns; ++c) schedule[0].b.push_back({top - 1, c});

  for (int level = top - 1; level >= 0; --level) {
    for (int u = 0; u < bundles; ++u) {
      const int cycle = 2 + (top - 1 - level) * bundles + u;
      ScheduleEntry& entry = schedule[cycle - 1];
      entry.d = bundle_groups(level, u);
      if (level >= 1) {
        entry.b = bundle_groups(level - 1, u);
        schedule[cycle].de = bundle_groups(level - 1, u);
      }
    }
  }
  return schedule;
}

namespace {

struct StorageModel {
  explicit StorageModel(int levels) : top(levels - 1), path_written(kColumns + 1) {
    b_tag.fill(top);        // b of the top level is loaded at reset
    ped_tag.fill(top + 1);  // nothing stored yet
    for (auto& row : path_written) row.assign(levels, false);
  }

  int top;
  std::array<int, kColumns + 1> b_tag{};
  std::array<int, kColumns + 1> ped_tag{};
  std::vector<std::vector<bool>> path_written;
};

bool valid_group(const GroupId& g, int levels) {
  if (g.level < 0 || g.level >= levels) return false;
  if (g.level == levels - 1) return g.column == 1;
  return g.column >= 1 && g.column <= kColumns;
}

}  // namespace

std::vector<Hazard> check_hazards(const Schedule& schedule, int levels) {
  std::vector<Hazard> hazards;
  StorageModel state(levels);
  const int top = levels - 1;

  for (const ScheduleEntry& entry : schedule) {
    const StorageModel before = state;
    std::map<std::string, int> writes;
    auto report = [&](char unit, const GroupId& g, HazardKind kind, std::string detail) {
      hazards.push_back({entry.cycle, unit, g, kind, std::move(detail)});
    };
    auto expect_tag = [&](char unit, const GroupId& g, const char* what, int actual,
                          int expected) {
      if (actual == expected) return;
      const HazardKind kind =
          actual > expected ? HazardKind::kReadBeforeWrite : HazardKind::kOverwritten;
      report(unit, g, kind,
             std::string(what) + " of column " + std::to_string(g.column) + " holds level " +
                 std::to_string(actual) + ", needs level " + std::to_string(expected));
    };
    auto note_write = [&](char unit, const GroupId& g, const std::string& resource) {
      if (++writes[resource] == 2) {
        report(unit, g, HazardKind::kWriteConflict, resource + " written twice in one cycle");
      }
    };

    std::set<GroupId> seen;
    auto claim = [&](char unit, const GroupId& g) {
      if (!seen.insert(g).second) {
        report(unit, g, HazardKind::kSharedGroup, "group already used by another unit");
      }
    };

    for (const GroupId& g : entry.d) {
      claim('d', g);
      if (!valid_group(g, levels)) {
        report('d', g, HazardKind::kReadBeforeWrite, "group does not exist in this tree");
        continue;
      }
      if (g.level == top) {
        for (int c = 1; c <= kColumns; ++c) {
          expect_tag('d', g, "b cache", before.b_tag[c], top);
          note_write('d', g, "ped cache column " + std::to_string(c));
          state.ped_tag[c] = top;
        }
        continue;
      }
      expect_tag('d', g, "b cache", before.b_tag[g.column], g.level);
      expect_tag('d', g, "ped cache", before.ped_tag[g.column], g.level + 1);
      if (g.level <= top - 2 && !before.path_written[g.column][g.level]) {
        report('d', g, HazardKind::kReadBeforeWrite,
               "survivor symbol not yet chosen by direct enumeration");
      }
      note_write('d', g, "ped cache column " + std::to_string(g.column));
      state.ped_tag[g.column] = g.level;
    }

    for (const GroupId& g : entry.b) {
      claim('b', g);
      if (!valid_group(g, levels) || g.level == top) {
        report('b', g, HazardKind::kReadBeforeWrite, "no b task exists for this group");
        continue;
      }
      for (int j = g.level + 1; j <= top - 2; ++j) {
        if (!before.path_written[g.column][j]) {
          report('b', g, HazardKind::kReadBeforeWrite,
                 "path symbol of level " + std::to_string(j) + " not yet chosen");
        }
      }
      note_write('b', g, "b cache column " + std::to_string(g.column));
      state.b_tag[g.column] = g.level;
    }

    for (const GroupId& g : entry.de) {
      claim('e', g);
      if (!valid_group(g, levels) || g.level > top - 2) {
        report('e', g, HazardKind::kReadBeforeWrite, "no enumeration task exists for this group");
        continue;
      }
      expect_tag('e', g, "b cache", before.b_tag[g.column], g.level);
      note_write('e', g,
                 "path history column " + std::to_string(g.column) + " level " +
                     std::to_string(g.level));
      state.path_written[g.column][g.level] = true;
    }
  }
  return hazards;
}

std::vector<std::string> check_coverage(const Schedule& schedule, int levels) {
  const int top = levels - 1;
  std::map<GroupId, int> d_count;
  std::map<GroupId, int> b_count;
  std::map<GroupId, int> de_count;
  for (const ScheduleEntry& e : schedule) {
    for (const auto& g : e.d) ++d_count[g];
    for (const auto& g : e.b) ++b_count[g];
    for (const auto& g : e.de) ++de_count[g];
  }
  std::vector<std::string> problems;
  auto expect = [&](std::map<GroupId, int>& counts, const GroupId& g, int want, const char* task) {
    const int got = counts[g];
    if (got != want) {
      problems.push_back(to_string(g) + ": " + std::to_string(got) + " " + task + " tasks, expected " +
                         std::to_string(want));
    }
    counts.erase(g);
  };
  expect(d_count, {top, 1}, 1, "d");
  for (int level = top - 1; level >= 0; --level) {
    for (int c = 1; c <= kColumns; ++c) {
      expect(d_count, {level, c}, 1, "d");
      expect(b_count, {level, c}, 1, "b");
      if (level <= top - 2) expect(de_count, {level, c}, 1, "DE");
    }
  }
  for (const auto* extra : {&d_count, &b_count, &de_count}) {
    for (const auto& [g, n] : *extra) {
      problems.push_back(to_string(g) + ": unexpected task (" + std::to_string(n) + ")");
    }
  }
  return problems;
}

std::string format_groups(std::span<const GroupId> groups) {
  if (groups.empty()) return "-";
  const bool same_level_run =
      std::all_of(groups.begin(), groups.end(),
                  [&](const GroupId& g) { return g.level == groups.front().level; }) &&
      groups.back().column - groups.front().column + 1 == static_cast<int>(groups.size());
  if (groups.size() > 1 && same_level_run) {
    return to_string(groups.front()) + "~" + to_string(groups.back());
  }
  std::string out;
  for (std::size_t i = 0; i < groups.size(); ++i) {
    if (i) out += '+';
    out += to_string(groups[i]);
  }
  return out;
}

std::string trace_csv(const Schedule& schedule) {
  std::ostringstream out;
  out << "cycle,d_group,b_group,de_group\n";
  for (const ScheduleEntry& e : schedule) {
    out << e.cycle << ',' << format_groups(e.d) << ',' << format_groups(e.b) << ','
        << format_groups(e.de) << '\n';
  }
  return out.str();
}

std::size_t scheduled_nodes(const Schedule& schedule) {
  std::size_t nodes = 0;
  for (const ScheduleEntry& e : schedule) nodes += e.d.size() * kGroupSize;
  return nodes;
}

}  // namespace fsd::arch
