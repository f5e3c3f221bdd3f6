#include "atlab/fixture.hpp"

namespace atlab {

Vec ArchFixture::alphas() const {
    Vec v;
    for (const FixtureRow& r : rows) v.push_back(r.alpha);
    return v;
}

Vec ArchFixture::pgdat_column() const {
    Vec v;
    for (const FixtureRow& r : rows) v.push_back(r.pgdat_acc);
    return v;
}

Vec ArchFixture::deat_column() const {
    Vec v;
    for (const FixtureRow& r : rows) v.push_back(r.deat_acc);
    return v;
}

Vec ArchFixture::diff_column() const {
    Vec v;
    for (const FixtureRow& r : rows) v.push_back(r.acc_diff());
    return v;
}

const std::array<ArchFixture, 3>& table2_fixture() {
    static const std::array<ArchFixture, 3> fixture = {{
        {"preact-resnet",
         {{0.010, 44.11, 45.07},
          {0.012, 44.92, 46.12},
          {0.014, 45.26, 46.25},
          {0.018, 46.21, 46.76},
          {0.020, 46.30, 46.94},
          {0.022, 45.92, 47.30},
          {0.024, 46.47, 47.64},
          {0.028, 46.24, 47.19},
          {0.030, 46.61, 47.46},
          {0.100, 47.21, 48.84},
          {0.150, 48.05, 50.24},
          {0.200, 49.04, 51.38},
          {0.250, 49.34, 51.99},
          {0.300, 50.01, 52.50}}},
        {"senet",
         {{0.010, 43.38, 44.16},
          {0.012, 44.33, 45.25},
          {0.014, 45.00, 45.90},
          {0.018, 45.91, 47.25},
          {0.020, 46.45, 47.51},
          {0.022, 46.42, 47.81},
          {0.024, 46.52, 48.06},
          {0.028, 47.19, 48.20},
          {0.030, 47.19, 48.16},
          {0.100, 48.36, 50.29},
          {0.150, 48.99, 51.36},
          {0.200, 49.36, 52.00},
          {0.250, 50.24, 52.19},
          {0.300, 50.83, 52.90}}},
        {"vgg",
         {{0.010, 40.34, 41.00},
          {0.012, 40.97, 41.03},
          {0.014, 40.75, 41.11},
          {0.018, 40.93, 42.32},
          {0.020, 41.46, 42.08},
          {0.022, 41.81, 43.20},
          {0.024, 42.35, 43.45},
          {0.028, 43.07, 43.84},
          {0.030, 42.42, 44.63},
          {0.100, 45.84, 47.74},
          {0.150, 46.99, 48.70},
          {0.200, 47.94, 49.18},
          {0.250, 48.07, 49.28},
          {0.300, 48.76, 49.33}}},
    }};
    return fixture;
}

double table2_checksum() {
    double s = 0.0;
    for (const ArchFixture& arch : table2_fixture())
        for (const FixtureRow& r : arch.rows) s += r.alpha + r.pgdat_acc + r.deat_acc;
    return s;
}

}  // namespace atlab
