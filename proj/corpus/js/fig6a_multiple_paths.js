function search(term, byArtist) {
  if (byArtist) {
    var query = "?q=" + encodeURIComponent(term) + "&type=artist";
  } else {
    query = "?q=" + encodeURIComponent(term) + "&type=album";
  }
  $.get("https://api.spotify.com/v1/search" + query, function (data) {
    show(data);
  });
}
