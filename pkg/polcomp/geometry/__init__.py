# Конструкции на симплексе, замкнутые формы TV и переборный оракул
from .models import SimplexPoint, OracleBudget, OracleResult, FamilyCheck, GeometryCertificate
from .families import (
    make_point, lemma4_family, vertex_rep, lemma5_family, lemma6_family, closed_form_tv, polytope_faces
)
from .oracle import project_to_simplex, tv_extrema_oracle, default_budget
from .certificate import certificate, family_checks

__all__ = [
    'SimplexPoint', 'OracleBudget', 'OracleResult', 'FamilyCheck', 'GeometryCertificate',
    'make_point', 'lemma4_family', 'vertex_rep', 'lemma5_family', 'lemma6_family',
    'closed_form_tv', 'polytope_faces',
    'project_to_simplex', 'tv_extrema_oracle', 'default_budget',
    'certificate', 'family_checks'
]
