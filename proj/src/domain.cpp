#include "caas/domain.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "caas/error.hpp"

namespace caas {

namespace {

// Clock residue below this is treated as an exact boundary hit.
constexpr double kTimeEps = 1e-6;

int rank(WorkloadStatus s) {
  switch (s) {
    case WorkloadStatus::Bootstrapping: return 0;
    case WorkloadStatus::Confirmed: return 1;
    case WorkloadStatus::Completed: return 2;
    case WorkloadStatus::Cancelled: return 2;
  }
  return 0;
}

}  // namespace

std::string_view to_string(WorkloadStatus s) {
  switch (s) {
    case WorkloadStatus::Bootstrapping: return "bootstrapping";
    case WorkloadStatus::Confirmed: return "confirmed";
    case WorkloadStatus::Completed: return "completed";
    case WorkloadStatus::Cancelled: return "cancelled";
  }
  return "unknown";
}

Workload::Workload(WorkloadId id, double arrival_time, ItemCounts remaining_items, double ttc_deadline)
    : id_(std::move(id)),
      arrival_time_(arrival_time),
      remaining_(std::move(remaining_items)),
      ttc_deadline_(ttc_deadline) {
  for (const auto& [type, count] : remaining_) {
    if (count < 0) throw InputDomainError("negative item count for data type '" + type.value + "'");
  }
}

std::int64_t Workload::remaining(const DataTypeId& type) const {
  auto it = remaining_.find(type);
  return it == remaining_.end() ? 0 : it->second;
}

std::int64_t Workload::total_remaining() const noexcept {
  std::int64_t total = 0;
  for (const auto& [type, count] : remaining_) total += count;
  return total;
}

void Workload::complete_items(const DataTypeId& type, std::int64_t count) {
  auto it = remaining_.find(type);
  if (it == remaining_.end()) throw InputDomainError("unknown data type '" + type.value + "'");
  if (count < 0 || count > it->second) {
    throw InputDomainError("cannot complete " + std::to_string(count) + " items of '" + type.value +
                           "' with " + std::to_string(it->second) + " remaining");
  }
  it->second -= count;
}

void Workload::advance_status(WorkloadStatus next) {
  if (next == status_) return;
  const bool terminal = status_ == WorkloadStatus::Completed || status_ == WorkloadStatus::Cancelled;
  if (terminal || rank(next) < rank(status_)) {
    throw InputDomainError("illegal workload status transition " + std::string(to_string(status_)) +
                           " -> " + std::string(to_string(next)));
  }
  status_ = next;
}

void Workload::set_service_rate(double rate, double cap) {
  if (!(rate >= 0.0)) throw InputDomainError("service rate must be non-negative");
  if (status_ == WorkloadStatus::Confirmed) rate = std::min(rate, cap);
  service_rate_ = rate;
}

double required_cus(const Workload& w, const CusPredictions& predictions) {
  double total = 0.0;
  for (const auto& [type, count] : w.remaining_items()) {
    if (count == 0) continue;
    auto it = predictions.find(type);
    if (it == predictions.end()) {
      throw EstimatorNotReady("no CUS prediction for data type '" + type.value + "' of workload '" +
                              w.id().value + "'");
    }
    if (it->second < 0.0) throw InputDomainError("negative CUS prediction");
    total += static_cast<double>(count) * it->second;
  }
  return total;
}

void BillingLedger::charge_quantum(const InstanceRecord& instance) {
  ++quantums_[instance.instance_id];
  cu_quantums_ += instance.cu_count;
}

InstanceFleet::InstanceFleet(double billing_quantum, double unit_price, double startup_delay)
    : billing_quantum_(billing_quantum), unit_price_(unit_price), startup_delay_(startup_delay) {
  if (!(billing_quantum > 0.0)) throw ConfigError("billing_quantum", "must be positive");
  if (!(unit_price >= 0.0)) throw ConfigError("unit_price", "must be non-negative");
  if (!(startup_delay >= 0.0)) throw ConfigError("instance_startup_delay", "must be non-negative");
}

double InstanceFleet::contribution(const InstanceRecord& r) const {
  return r.state == InstanceState::Active ? r.cu_count * r.remaining_prepaid : 0.0;
}

InstanceId InstanceFleet::launch(BillingLedger& ledger, int cu_count) {
  if (cu_count <= 0) throw InputDomainError("cu_count must be positive");
  InstanceRecord rec;
  rec.instance_id = InstanceId{next_id_++};
  rec.cu_count = cu_count;
  rec.remaining_prepaid = billing_quantum_;
  rec.start_delay_remaining = startup_delay_;
  rec.state = startup_delay_ > 0.0 ? InstanceState::Starting : InstanceState::Active;
  ledger.charge_quantum(rec);
  if (rec.state == InstanceState::Active) {
    active_cus_ += rec.cu_count;
    prepaid_cus_seconds_ += contribution(rec);
  }
  live_.push_back(rec);
  return rec.instance_id;
}

void InstanceFleet::terminate(const InstanceId& id) {
  auto it = std::find_if(live_.begin(), live_.end(),
                         [&](const InstanceRecord& r) { return r.instance_id == id; });
  if (it == live_.end()) return;
  if (it->state == InstanceState::Active) {
    active_cus_ -= it->cu_count;
    prepaid_cus_seconds_ -= contribution(*it);
  }
  live_.erase(it);
}

void InstanceFleet::terminate_all() {
  live_.clear();
  active_cus_ = 0;
  prepaid_cus_seconds_ = 0.0;
}

InstanceFleet::AdvanceReport InstanceFleet::advance(double dt, BillingLedger& ledger) {
  if (!(dt >= 0.0)) throw EngineFault("fleet advanced by negative dt");
  AdvanceReport report;
  for (auto& r : live_) {
    const double before = contribution(r);
    r.remaining_prepaid -= dt;
    if (r.remaining_prepaid <= kTimeEps) {
      // Every boundary crossed while alive is a new quantum charge.
      while (r.remaining_prepaid <= kTimeEps) {
        r.remaining_prepaid += billing_quantum_;
        ledger.charge_quantum(r);
        ++report.renewals;
      }
      if (std::abs(r.remaining_prepaid - billing_quantum_) <= kTimeEps) r.remaining_prepaid = billing_quantum_;
    }
    if (r.state == InstanceState::Starting) {
      r.start_delay_remaining -= dt;
      if (r.start_delay_remaining <= kTimeEps) {
        r.start_delay_remaining = 0.0;
        r.state = InstanceState::Active;
        active_cus_ += r.cu_count;
        ++report.activations;
      }
    }
    prepaid_cus_seconds_ += contribution(r) - before;
  }
  return report;
}

double InstanceFleet::time_to_next_event() const {
  double next = std::numeric_limits<double>::infinity();
  for (const auto& r : live_) {
    next = std::min(next, r.remaining_prepaid);
    if (r.state == InstanceState::Starting) next = std::min(next, r.start_delay_remaining);
  }
  return next;
}

int InstanceFleet::active_count() const noexcept {
  return static_cast<int>(std::count_if(live_.begin(), live_.end(), [](const InstanceRecord& r) {
    return r.state == InstanceState::Active;
  }));
}

int InstanceFleet::starting_count() const noexcept {
  return static_cast<int>(std::count_if(live_.begin(), live_.end(), [](const InstanceRecord& r) {
    return r.state == InstanceState::Starting;
  }));
}

const InstanceRecord* InstanceFleet::find(const InstanceId& id) const {
  auto it = std::find_if(live_.begin(), live_.end(),
                         [&](const InstanceRecord& r) { return r.instance_id == id; });
  return it == live_.end() ? nullptr : &*it;
}

int total_cus(const InstanceFleet& fleet) {
  int total = 0;
  for (const auto& r : fleet.instances()) {
    if (r.state == InstanceState::Active) total += r.cu_count;
  }
  return total;
}

double total_prepaid_cus_seconds(const InstanceFleet& fleet) {
  double total = 0.0;
  for (const auto& r : fleet.instances()) {
    if (r.state == InstanceState::Active) total += r.cu_count * r.remaining_prepaid;
  }
  return total;
}

double lb_cost(const BillingLedger& ledger, const InstanceFleet& fleet) {
  const double quantums = ledger.cus_consumed() / fleet.billing_quantum();
  // Relative slack absorbs float noise from summing task CUS.
  const double whole = std::ceil(quantums - 1e-9 * std::max(1.0, quantums));
  return std::max(0.0, whole) * ledger.unit_price();
}

}  // namespace caas
