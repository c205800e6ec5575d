# Path from repo root: app/adversary/__init__.py
from app.adversary.attacks import (
    make_attack,
    null_attack,
    pgd_attack,
    projected_ascent,
    random_attack,
)
from app.adversary.config import AdversaryConfig
from app.adversary.projection import (
    CAP_RADIUS,
    clip_ball,
    domain_project,
    domain_residual,
    on_domain,
    project_to_domain,
    require_domain,
)


__all__ = [
    "CAP_RADIUS",
    "AdversaryConfig",
    "clip_ball",
    "domain_project",
    "domain_residual",
    "make_attack",
    "null_attack",
    "on_domain",
    "pgd_attack",
    "project_to_domain",
    "projected_ascent",
    "random_attack",
    "require_domain",
]
