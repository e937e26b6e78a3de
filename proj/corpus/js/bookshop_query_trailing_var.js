function find(params) {
  var qs = $.param(params);
  $.get('http://api.bookshop.test/api/books?' + qs);
}
