#include "dttp/harness.hpp"

namespace dttp {

/// Bundled 52-city layout (integer coordinates on a 1000 x 1000 grid,
/// minimum pairwise distance ~35.8). Also shipped as data/city52.coords.
const std::vector<City>& builtin_city52() {
  static const std::vector<City> cities = {
    {1, 664.0, 837.0},
    {2, 281.0, 438.0},
    {3, 188.0, 41.0},
    {4, 903.0, 398.0},
    {5, 177.0, 643.0},
    {6, 528.0, 324.0},
    {7, 50.0, 273.0},
    {8, 746.0, 345.0},
    {9, 560.0, 59.0},
    {10, 476.0, 360.0},
    {11, 561.0, 900.0},
    {12, 171.0, 934.0},
    {13, 859.0, 681.0},
    {14, 531.0, 80.0},
    {15, 371.0, 157.0},
    {16, 286.0, 234.0},
    {17, 936.0, 272.0},
    {18, 124.0, 861.0},
    {19, 883.0, 456.0},
    {20, 808.0, 241.0},
    {21, 576.0, 938.0},
    {22, 27.0, 406.0},
    {23, 514.0, 509.0},
    {24, 790.0, 8.0},
    {25, 799.0, 774.0},
    {26, 67.0, 534.0},
    {27, 904.0, 745.0},
    {28, 461.0, 518.0},
    {29, 704.0, 991.0},
    {30, 538.0, 588.0},
    {31, 801.0, 61.0},
    {32, 802.0, 466.0},
    {33, 192.0, 369.0},
    {34, 600.0, 782.0},
    {35, 979.0, 305.0},
    {36, 814.0, 116.0},
    {37, 910.0, 315.0},
    {38, 428.0, 77.0},
    {39, 140.0, 612.0},
    {40, 688.0, 492.0},
    {41, 741.0, 184.0},
    {42, 490.0, 315.0},
    {43, 678.0, 681.0},
    {44, 680.0, 902.0},
    {45, 953.0, 30.0},
    {46, 147.0, 433.0},
    {47, 103.0, 233.0},
    {48, 706.0, 221.0},
    {49, 637.0, 207.0},
    {50, 651.0, 495.0},
    {51, 414.0, 892.0},
    {52, 470.0, 460.0}
  };
  return cities;
}

}  // namespace dttp
