#pragma once

#include "ihtc/bench.hpp"
#include "ihtc/clusterers.hpp"
#include "ihtc/clustering.hpp"
#include "ihtc/dataset.hpp"
#include "ihtc/error.hpp"
#include "ihtc/evaluation.hpp"
#include "ihtc/ihtc_pipeline.hpp"
#include "ihtc/itis.hpp"
#include "ihtc/kd_tree.hpp"
#include "ihtc/knn_graph.hpp"
#include "ihtc/memory.hpp"
#include "ihtc/metric.hpp"
#include "ihtc/threshold_clustering.hpp"
