import logging

from db.function import load_function
from db.space import load_space
from db.spec import load_norm_spec
from route import add_output_args, emit
from utils.function_spaces import quotient_norm
from utils.ms_functional import reference_norm
from utils.norm_specs import QuotientSpec
from utils.space_core import FinitePointSpace, WeightedSample

logger = logging.getLogger(__name__)


def handle_norm(args) -> int:
    space = load_space(args.space)
    f = load_function(args.function, space)
    spec = load_norm_spec(args.spec)
    payload = {"spec": spec.model_dump(mode="json"), "value": reference_norm(space, f, spec)}
    if isinstance(spec, QuotientSpec) and isinstance(space, FinitePointSpace):
        result = quotient_norm(WeightedSample.from_space(space, f), spec.inner, space)
        payload.update(minimizer=result.minimizer, certified=result.certified, method=result.method)
    emit(args, payload, text=f"{payload['value']:.17g}")
    return 0


def register(subparsers) -> None:
    sub = subparsers.add_parser("norm", help="노름 계산")
    sub.add_argument("--space", required=True)
    sub.add_argument("--function", required=True)
    sub.add_argument("--spec", required=True, help="노름 명세 JSON")
    add_output_args(sub)
    sub.set_defaults(handler=handle_norm)
