#pragma once

#include <compare>
#include <span>
#include <string>
#include <vector>

#include "fsd/fsd_core.hpp"

namespace fsd::arch {

// Group of four sibling-adjacent nodes. The top level has one group
// (column 1, its four nodes feed columns 1..4 below); every other level has
// four, column c holding candidate paths 4(c-1) .. 4(c-1)+3.
struct GroupId {
  int level = 0;
  int column = 1;

  friend auto operator<=>(const GroupId&, const GroupId&) = default;
};

std::string to_string(const GroupId& g);  // "G5.3"

// Tasks issued in one clock cycle. An empty vector means the unit idles; a
// vector with several groups means the unit bank handles all of them in that
// cycle (level-below-top b in cycle 1, or paired columns at P = 8).
struct ScheduleEntry {
  int cycle = 0;  // 1-based
  std::vector<GroupId> d;
  std::vector<GroupId> b;
  std::vector<GroupId> de;
};

using Schedule = std::vector<ScheduleEntry>;

inline constexpr int kColumns = 4;
inline constexpr int kGroupSize = 4;

// Breadth-first task schedule for the {1, ..., 1, 4, 4} distribution.
//
// Cycle 1 runs d on the top group and b for every group one level down.
// Afterwards the groups of each lower level are swept column by column: d on a
// group shares its cycle with b of the child group in the same column, DE of
// that child group runs one cycle later and its d when the column comes round
// again. With P = 8 two columns are handled per cycle.
Schedule build_schedule(int levels, int parallelism, const NodeDistribution& dist);

enum class HazardKind {
  kReadBeforeWrite,  // input not yet produced at the start of the cycle
  kOverwritten,      // input already replaced by a later level
  kSharedGroup,      // two units work on the same group in one cycle
  kWriteConflict,    // two units write the same storage in one cycle
};

const char* to_string(HazardKind kind);

struct Hazard {
  int cycle = 0;
  char unit = 'd';  // 'd', 'b' or 'e' (DE)
  GroupId group;
  HazardKind kind = HazardKind::kReadBeforeWrite;
  std::string detail;
};

// Replays the schedule against a model of the b, PED and path-history storage
// (reads see the state at the start of the cycle, writes commit at its end) and
// reports every task whose inputs were not produced in a strictly earlier cycle
// or were already overwritten.
std::vector<Hazard> check_hazards(const Schedule& schedule, int levels);

// Every group gets exactly one d task, every group below the top gets exactly
// one b task and every group below the top two levels exactly one DE task.
// Returns a description per violation.
std::vector<std::string> check_coverage(const Schedule& schedule, int levels);

// "cycle,d_group,b_group,de_group" header plus one line per cycle. Groups of
// one level spanning several columns print as "G6.1~G6.4", idle units as "-".
std::string trace_csv(const Schedule& schedule);
std::string format_groups(std::span<const GroupId> groups);

// Nodes whose PED is evaluated over the whole schedule.
std::size_t scheduled_nodes(const Schedule& schedule);

}  // namespace fsd::arch
