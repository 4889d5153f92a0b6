#ifndef ECHOMAP_IO_DATASET_HPP
#define ECHOMAP_IO_DATASET_HPP

#include <Eigen/Core>
#include <optional>
#include <string>
#include <vector>

namespace echomap::io {

// One stored mel segment with its labels. pipe_label -1 marks an
// unlabeled segment (analysis outputs reuse the same container).
struct DatasetRecord {
    int soi_index = -1;
    Eigen::MatrixXd values; // rows x cols, fixed per file
    int pipe_label = -1;
    std::optional<double> depth;
};

struct Dataset {
    int rows = 0;
    int cols = 0;
    std::vector<DatasetRecord> records;
};

// Binary dataset blob: header (magic, version, record count, segment
// shape) followed by fixed-size records of doubles plus label bytes.
void save_dataset(const std::string& path, const Dataset& dataset);

// Throws IoError naming the record index on truncation or shape mismatch.
Dataset load_dataset(const std::string& path);

} // namespace echomap::io

#endif
