#include "ppdb/instance.hpp"

namespace ppdb {

std::string Fact::to_string() const {
    std::string s = relation + "(";
    for (std::size_t i = 0; i < tuple.size(); ++i) {
        if (i) s += ",";
        s += value_to_string(tuple[i]);
    }
    return s + ")";
}

std::uint64_t checked_add(std::uint64_t a, std::uint64_t b) {
    std::uint64_t r;
    if (__builtin_add_overflow(a, b, &r))
        throw Error(ErrorCode::MultiplicityOverflow, "addition overflow");
    return r;
}

std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
    std::uint64_t r;
    if (__builtin_mul_overflow(a, b, &r))
        throw Error(ErrorCode::MultiplicityOverflow, "multiplication overflow");
    return r;
}

void BagInstance::insert(const Fact& fact, std::uint64_t count) {
    if (count == 0) return;
    auto& slot = mult_[fact];
    slot = checked_add(slot, count);
}

void BagInstance::remove(const Fact& fact, std::uint64_t count) {
    auto it = mult_.find(fact);
    if (it == mult_.end()) return;
    if (it->second <= count) mult_.erase(it);
    else it->second -= count;
}

std::uint64_t BagInstance::multiplicity(const Fact& fact) const {
    auto it = mult_.find(fact);
    return it == mult_.end() ? 0 : it->second;
}

std::uint64_t BagInstance::cardinality() const {
    std::uint64_t total = 0;
    for (const auto& [f, m] : mult_) total = checked_add(total, m);
    return total;
}

std::vector<std::pair<Fact, std::uint64_t>> BagInstance::canonicalize() const {
    return {mult_.begin(), mult_.end()};
}

BagInstance BagInstance::support() const {
    BagInstance out;
    for (const auto& [f, m] : mult_) out.insert(f, 1);
    return out;
}

BagInstance BagInstance::restrict_to(const std::string& relation) const {
    BagInstance out;
    for (const auto& [f, m] : mult_)
        if (f.relation == relation) out.insert(f, m);
    return out;
}

bool BagInstance::is_set() const {
    for (const auto& [f, m] : mult_)
        if (m > 1) return false;
    return true;
}

}  // namespace ppdb
