from pydantic import BaseModel as PydanticBaseModel
import xmltodict


class BaseModel(PydanticBaseModel):
    """A sub-class of pydantic `BaseModel` with named dump templates and
    XML rendering.
    """
    class Config:
        allow_population_by_field_name = True
        use_enum_values = True

    class XmlTemplate:
        """
        `XmlTemplate` holds per-class keyword arguments for `dict`, `json` and
        `to_xml`, selected through the `mode` keyword:
        - stable: output that is byte-identical between identical runs
        - full: everything, including timings
        """
        stable = {}
        full = {}

    def _template_kwargs(self, kwargs: dict) -> dict:
        if 'mode' in kwargs:
            additional_kwargs = getattr(
                self.XmlTemplate, kwargs.pop('mode'), {}
            )
            return {**kwargs, **additional_kwargs}
        return kwargs

    def dict(self, *args, **kwargs) -> dict:
        """`BaseModel.dict` with the `mode` keyword selecting an
        `XmlTemplate` entry (`stable` or `full`)."""
        return super().dict(*args, **self._template_kwargs(kwargs))

    def json(self, *args, **kwargs) -> str:
        return super().json(*args, **self._template_kwargs(kwargs))

    def xml_dict(self, *args, **kwargs) -> dict:
        """Dictionary of the XML document with this object at the top level,
        keyed by the class name.
        """
        return {self.__class__.__name__: self.dict(*args, **kwargs)}

    def to_xml(self, mode: str = 'stable', pretty: bool = False) -> str:
        """Render this object as an XML fragment rooted at the class name.

        Args:
            mode (str, optional): `XmlTemplate` entry, `stable` by default
            pretty (bool, optional): indent nested elements
        """
        return xmltodict.unparse(
            self.xml_dict(mode=mode), full_document=False, pretty=pretty
        )


class FrozenModel(BaseModel):
    """Hashable, immutable value objects."""
    class Config:
        frozen = True
