#pragma once

// Core data model: workloads, the reserved instance fleet, and billing.

#include <compare>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace caas {

template <class Tag, class T>
struct StrongId {
  T value{};
  auto operator<=>(const StrongId&) const = default;
};

struct DataTypeTag;
struct WorkloadTag;
struct InstanceTag;

using DataTypeId = StrongId<DataTypeTag, std::string>;
using WorkloadId = StrongId<WorkloadTag, std::string>;
using InstanceId = StrongId<InstanceTag, std::uint64_t>;

using ItemCounts = std::map<DataTypeId, std::int64_t>;
using CusPredictions = std::map<DataTypeId, double>;

enum class WorkloadStatus { Bootstrapping, Confirmed, Completed, Cancelled };

std::string_view to_string(WorkloadStatus s);

/// A user job split into per-item tasks of one or more data types.
///
/// Remaining item counts only ever decrease and the status only moves
/// forward (Bootstrapping -> Confirmed -> Completed, with Cancelled reachable
/// from either of the first two). Violations throw.
class Workload {
 public:
  Workload(WorkloadId id, double arrival_time, ItemCounts remaining_items, double ttc_deadline);

  const WorkloadId& id() const noexcept { return id_; }
  double arrival_time() const noexcept { return arrival_time_; }
  const ItemCounts& remaining_items() const noexcept { return remaining_; }
  std::int64_t remaining(const DataTypeId& type) const;
  std::int64_t total_remaining() const noexcept;
  double ttc_deadline() const noexcept { return ttc_deadline_; }
  WorkloadStatus status() const noexcept { return status_; }
  double service_rate() const noexcept { return service_rate_; }

  void complete_items(const DataTypeId& type, std::int64_t count = 1);
  void advance_status(WorkloadStatus next);
  void set_ttc_deadline(double deadline) { ttc_deadline_ = deadline; }
  // `cap` is enforced only once the workload is Confirmed.
  void set_service_rate(double rate, double cap);

 private:
  WorkloadId id_;
  double arrival_time_;
  ItemCounts remaining_;
  double ttc_deadline_;
  WorkloadStatus status_ = WorkloadStatus::Bootstrapping;
  double service_rate_ = 0.0;
};

/// Remaining CUS to finish `w`: sum over data types of remaining items times
/// the per-item prediction. Types with no remaining items need no prediction.
double required_cus(const Workload& w, const CusPredictions& predictions);

enum class InstanceState { Starting, Active, Terminated };

struct InstanceRecord {
  InstanceId instance_id;
  int cu_count = 1;
  double remaining_prepaid = 0.0;  // seconds until the next quantum is charged
  InstanceState state = InstanceState::Starting;
  double start_delay_remaining = 0.0;
};

class BillingLedger {
 public:
  explicit BillingLedger(double unit_price = 0.0081) : unit_price_(unit_price) {}

  void charge_quantum(const InstanceRecord& instance);
  void record_consumed(double cus) { cus_consumed_ += cus; }

  double unit_price() const noexcept { return unit_price_; }
  // Cost is derived from integer CU-quantum counts so it never drifts.
  double total_cost() const noexcept { return static_cast<double>(cu_quantums_) * unit_price_; }
  std::int64_t total_cu_quantums() const noexcept { return cu_quantums_; }
  const std::map<InstanceId, std::int64_t>& quantums_billed() const noexcept { return quantums_; }
  double cus_consumed() const noexcept { return cus_consumed_; }

 private:
  double unit_price_;
  std::map<InstanceId, std::int64_t> quantums_;
  std::int64_t cu_quantums_ = 0;
  double cus_consumed_ = 0.0;
};

/// Reserved instances. Instances are billed a full quantum at launch and on
/// every renewal while they stay alive; Starting instances are billed but do
/// not count towards usable capacity until their startup delay elapses.
class InstanceFleet {
 public:
  InstanceFleet(double billing_quantum = 3600.0, double unit_price = 0.0081,
                double startup_delay = 120.0);

  InstanceId launch(BillingLedger& ledger, int cu_count = 1);
  void terminate(const InstanceId& id);
  void terminate_all();

  struct AdvanceReport {
    int renewals = 0;
    int activations = 0;
  };
  // Moves the fleet clock forward, charging every quantum renewal crossed.
  AdvanceReport advance(double dt, BillingLedger& ledger);
  // Seconds until the next renewal or activation; +inf for an empty fleet.
  double time_to_next_event() const;

  // Incrementally maintained counterparts of total_cus/total_prepaid_cus_seconds.
  int active_cus() const noexcept { return active_cus_; }
  double prepaid_cus_seconds() const noexcept { return prepaid_cus_seconds_; }

  int active_count() const noexcept;
  int starting_count() const noexcept;
  int live_count() const noexcept { return static_cast<int>(live_.size()); }
  std::int64_t launched_count() const noexcept { return next_id_; }

  // Live (Starting or Active) instances ordered by launch.
  const std::vector<InstanceRecord>& instances() const noexcept { return live_; }
  const InstanceRecord* find(const InstanceId& id) const;

  double billing_quantum() const noexcept { return billing_quantum_; }
  double unit_price() const noexcept { return unit_price_; }
  double startup_delay() const noexcept { return startup_delay_; }

 private:
  double contribution(const InstanceRecord& r) const;

  double billing_quantum_;
  double unit_price_;
  double startup_delay_;
  std::vector<InstanceRecord> live_;
  std::uint64_t next_id_ = 0;
  int active_cus_ = 0;
  double prepaid_cus_seconds_ = 0.0;
};

// From-scratch recomputations over the live fleet.
int total_cus(const InstanceFleet& fleet);
double total_prepaid_cus_seconds(const InstanceFleet& fleet);

/// Cost had every billed CU-second executed a task: consumed CUS rounded up
/// to whole quantums.
double lb_cost(const BillingLedger& ledger, const InstanceFleet& fleet);

}  // namespace caas
