#pragma once

#include <array>
#include <string>
#include <vector>

#include "atlab/vec.hpp"

namespace atlab {

// Published CIFAR-10 robust-accuracy grid bundled as data: for each
// architecture, 14 learning rates with the PGD-AT and DEAT test accuracies
// (percent). These numbers are fixed inputs for the statistics paths, not
// something this artifact re-trains.
struct FixtureRow {
    double alpha;
    double pgdat_acc;
    double deat_acc;
    double acc_diff() const { return deat_acc - pgdat_acc; }
};

struct ArchFixture {
    std::string arch_tag;
    std::vector<FixtureRow> rows;

    Vec alphas() const;
    Vec pgdat_column() const;
    Vec deat_column() const;
    Vec diff_column() const;
};

const std::array<ArchFixture, 3>& table2_fixture();

// Sum of every alpha and accuracy value; pinned by a test against drift.
double table2_checksum();

}  // namespace atlab
