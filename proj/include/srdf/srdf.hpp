#pragma once

#include "srdf/bilateral.hpp"
#include "srdf/camera.hpp"
#include "srdf/config.hpp"
#include "srdf/consistency.hpp"
#include "srdf/depth_import.hpp"
#include "srdf/energy.hpp"
#include "srdf/errors.hpp"
#include "srdf/grid.hpp"
#include "srdf/kdtree.hpp"
#include "srdf/marching_cubes.hpp"
#include "srdf/mesh_ops.hpp"
#include "srdf/mesh_types.hpp"
#include "srdf/metrics.hpp"
#include "srdf/optimizer.hpp"
#include "srdf/photo_prior.hpp"
#include "srdf/pipeline.hpp"
#include "srdf/render.hpp"
#include "srdf/rng.hpp"
#include "srdf/sampling.hpp"
#include "srdf/scene.hpp"
#include "srdf/scene_io.hpp"
#include "srdf/threading.hpp"
#include "srdf/tsdf.hpp"
#include "srdf/view.hpp"
