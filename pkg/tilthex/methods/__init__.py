"""Make the method modules available upon import"""

import tilthex.methods.allocation
import tilthex.methods.baseline_allocator
import tilthex.methods.cant_selector
import tilthex.methods.force_polytope
import tilthex.methods.platform_model
import tilthex.methods.pose_controller
