var settings = loadSettings();
var apiRoot = settings.root;

function books(q) {
  $.get(apiRoot + '/books', {q: q});
}
