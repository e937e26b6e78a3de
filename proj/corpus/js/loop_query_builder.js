function search(params) {
  var query = '?';
  for (var key in params) {
    query += key + '=' + encodeURIComponent(params[key]) + '&';
  }
  $.get('https://api.spotify.com/v1/search' + query);
}
