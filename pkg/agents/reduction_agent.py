import logging
from typing import Callable, Optional, Tuple, Union

import numpy as np
from pydantic import BaseModel, Field

from agents.andersen_agent import apa_on_demand
from agents.clique_reduction_agent import (apa_clique_gadget, kclique_to_dyck2, kcycle_on_demand,
                                           triangle_to_dyck1, variant_reductions)
from agents.grammar_agent import load_grammar, right_quotient_grammar, to_cnf
from agents.matrix_reduction_agent import bmm_to_cfg, product_pairs, worst_case_family
from agents.oracle_agent import (bar_hillel_all_pairs, brute_kclique, brute_kcycle, brute_triangle,
                                 naive_bmm)
from agents.solver_agent import SolverAgent, SolverConfig
from agents.transform_agent import Homomorphism, hom_vertex_map, inverse_hom_transform, right_quotient_extend
from models.grammar_models import Grammar
from models.graph_models import LabeledGraph, SourceGraph
from models.reduction_models import NamedPairs, ReductionInstance
from utils.errors import GuardrailExceeded, ReductionInputError
from utils.grammar_dsl import serialize_grammar
from utils.graph_io import graph_digest

logger = logging.getLogger(__name__)

GENERATORS = (
    "triangle-dyck1",
    "kclique-dyck2",
    "bmm",
    "worst-case",
    "kcycle",
    "variant",
    "right-quotient",
    "inverse-hom",
    "apa-clique",
)

Answer = Union[bool, NamedPairs]


class ReductionConfig(BaseModel):
    """
    Configuration settings for the ReductionAgent.

    Attributes:
        k (int): Clique block size for the clique gadgets, cycle length for ``kcycle``
        target (str): Target language of ``kcycle`` and ``variant``
        grammar (str): Preset or grammar file for ``bmm``, ``worst-case``, ``right-quotient`` and ``inverse-hom``
        verify (Optional[bool]): Attach the brute-force answer; by default only when ``k <= 2``
    """
    k: int = Field(default=1, ge=1)
    target: str = "dyck:1"
    grammar: str = "dyck:1"
    verify: Optional[bool] = None


class ReductionAgent:
    """
    Builds reduction instances, attaches oracle answers and solves them.
    """

    def __init__(self, config: ReductionConfig):
        """
        Initialize the ReductionAgent.

        Args:
            config (ReductionConfig): Generator parameters shared by all generators
        """
        self.config = config
        self.solver = SolverAgent(SolverConfig())

    @property
    def verifying(self) -> bool:
        return self.config.verify if self.config.verify is not None else self.config.k <= 2

    def generate(
        self,
        generator: str,
        source: Optional[SourceGraph] = None,
        graph: Optional[LabeledGraph] = None,
        matrices: Optional[Tuple[np.ndarray, np.ndarray]] = None,
        n: Optional[int] = None,
        symbol: Optional[str] = None,
        hom: Optional[Homomorphism] = None,
    ) -> ReductionInstance:
        """
        Run one generator.

        Args:
            generator (str): One of :data:`GENERATORS`
            source (Optional[SourceGraph]): Source graph of the triangle, cycle and clique generators
            graph (Optional[LabeledGraph]): Labeled input of ``right-quotient`` and ``inverse-hom``
            matrices (Optional[Tuple[np.ndarray, np.ndarray]]): Factors for ``bmm``
            n (Optional[int]): Layer size for ``worst-case``
            symbol (Optional[str]): Quotient terminal for ``right-quotient``
            hom (Optional[Homomorphism]): Label images for ``inverse-hom``

        Returns:
            ReductionInstance: The instance, with ``ground_truth`` set when verifying
        """
        if generator not in GENERATORS:
            raise ReductionInputError(f"unknown generator {generator!r}; choose from {', '.join(GENERATORS)}")
        k = self.config.k
        logger.info("generating %s", generator)

        if generator in ("triangle-dyck1", "variant", "kcycle", "kclique-dyck2", "apa-clique"):
            if source is None:
                raise ReductionInputError(f"{generator} needs a source graph")
            if generator == "triangle-dyck1":
                instance = triangle_to_dyck1(source)
                return self._attach(instance, lambda: brute_triangle(source))
            if generator == "variant":
                instance = variant_reductions(source, self.config.target)
                return self._attach(instance, lambda: brute_triangle(source))
            if generator == "kcycle":
                instance = kcycle_on_demand(source, k, self.config.target)
                return self._attach(instance, lambda: brute_kcycle(source, k))
            build = kclique_to_dyck2 if generator == "kclique-dyck2" else apa_clique_gadget
            instance = build(source, k)
            return self._attach(instance, lambda: brute_kclique(source, 3 * k))

        g = load_grammar(self.config.grammar)
        if generator == "bmm":
            if matrices is None:
                raise ReductionInputError("bmm needs two matrices")
            a, b = matrices
            instance = bmm_to_cfg(a, b, g)
            witness_len = int(instance.parameters["k"])
            return self._attach(instance, lambda: product_pairs(naive_bmm(a, b), witness_len))
        if generator == "worst-case":
            if n is None:
                raise ReductionInputError("worst-case needs a layer size")
            return worst_case_family(g, n)
        if graph is None:
            raise ReductionInputError(f"{generator} needs a labeled input graph")
        if generator == "right-quotient":
            return self._right_quotient(g, graph, symbol)
        return self._inverse_hom(g, graph, hom)

    def _attach(self, instance: ReductionInstance, oracle: Callable[[], Answer]) -> ReductionInstance:
        if not self.verifying:
            return instance
        try:
            truth = oracle()
        except GuardrailExceeded as e:
            logger.warning("skipping verification: %s", e)
            return instance
        return instance.model_copy(update={"ground_truth": truth})

    def _right_quotient(self, g: Grammar, graph: LabeledGraph, symbol: Optional[str]) -> ReductionInstance:
        if not symbol:
            raise ReductionInputError("right-quotient needs a symbol")
        extended, sinks = right_quotient_extend(graph, symbol)
        instance = ReductionInstance(generator="right-quotient", parameters={"symbol": symbol},
                                     source_digest=graph_digest(graph), graph=extended,
                                     grammar_preset=g.name or self.config.grammar, mode="all_pairs_filtered",
                                     pair_filter=(graph.vertices, tuple(sinks.values())), decode=sinks)

        def quotient_truth() -> NamedPairs:
            quotient = to_cnf(right_quotient_grammar(g, symbol))
            pairs = bar_hillel_all_pairs(quotient, graph).named(graph)
            return tuple((u, sinks[v]) for u, v in pairs)

        return self._attach(instance, quotient_truth)

    def _inverse_hom(self, g: Grammar, graph: LabeledGraph, hom: Optional[Homomorphism]) -> ReductionInstance:
        if hom is None:
            raise ReductionInputError("inverse-hom needs a homomorphism")
        rep = hom_vertex_map(graph, hom)
        out = inverse_hom_transform(graph, hom)
        kept = tuple(dict.fromkeys(rep.values()))
        spelled = ",".join(f"{a}={'+'.join(img)}" for a, img in sorted(hom.items()))
        return ReductionInstance(generator="inverse-hom", parameters={"hom": spelled},
                                 source_digest=graph_digest(graph), graph=out,
                                 grammar_preset=g.name or self.config.grammar, mode="all_pairs_filtered",
                                 pair_filter=(kept, kept), decode=rep)

    def grammar_text(self, instance: ReductionInstance) -> str:
        return serialize_grammar(load_grammar(instance.grammar_preset))

    def answer(self, instance: ReductionInstance) -> Answer:
        """
        Solve the instance: the on-demand verdict, or the filtered All-Pairs output as named pairs.
        """
        graph = instance.graph
        if instance.grammar_preset == "apa":
            return apa_on_demand(graph, *instance.query)
        g = load_grammar(instance.grammar_preset)
        if instance.mode == "on_demand":
            return self.solver.on_demand(g, graph, *instance.query)
        sources, targets = (set(side) for side in instance.pair_filter)
        pairs = self.solver.all_pairs(g, graph).named(graph)
        return tuple((u, v) for u, v in pairs if u in sources and v in targets)

    def check(self, instance: ReductionInstance) -> Optional[bool]:
        """Whether the solver agrees with the attached oracle answer (None when there is none)."""
        if instance.ground_truth is None:
            return None
        got = self.answer(instance)
        if isinstance(instance.ground_truth, bool):
            return got == instance.ground_truth
        return set(got) == set(instance.ground_truth)
