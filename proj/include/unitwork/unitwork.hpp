#pragma once

#include "unitwork/error.hpp"
#include "unitwork/core.hpp"
#include "unitwork/frequency_grid.hpp"
#include "unitwork/ensemble_hierarchy.hpp"
#include "unitwork/semantic_net.hpp"
#include "unitwork/logic_layer.hpp"
#include "unitwork/config.hpp"
#include "unitwork/model.hpp"
#include "unitwork/snapshot.hpp"
#include "unitwork/report.hpp"
#include "unitwork/dot.hpp"
